// Command-line surface. Subcommand groups:
//   net  build | trace | resistance | diameter   finite network operations
//   seq  derive | project                        scalar sequence calculus
//   exp  compat | sgpart | decomp | projection | diameter | symmetry
// Exit codes: 0 success (and every experiment row passing), 1 experiment
// failure, 2 usage or configuration error. Results go to stdout unless
// --out is given; no other file is touched.
#pragma once

#include <string>
#include <vector>

namespace ssg::cli {

// args in natural order, program name excluded.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace ssg::cli
