// Command-line surface: the documented examples, exit codes 0/1/2, output
// formats, --out as the only file write, and the report round-trip through
// emitted JSON.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ssg/engine.hpp"
#include "ssg/experiments.hpp"
#include "ssg/matching.hpp"
#include "ssg/network.hpp"

using namespace ssg;

namespace {

constexpr const char* kGeometric = R"({"family":"geometric","c":0.5,"q":0.5})";
constexpr const char* kConstant = R"({"family":"constant","rho":0.25})";

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  int code = cli::run(args);
  std::cout.rdbuf(old);
  if (out) *out = captured.str();
  return code;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream file(p);
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

}  // namespace

TEST_CASE("corner resistance example prints 2/3 at 10 digits") {
  std::string out;
  CHECK(run_cli({"net", "resistance", "--seq", kGeometric, "--m", "2", "--from", ":1", "--to",
                 ":2"},
                &out) == 0);
  CHECK(out == "0.6666666667\n");
}

TEST_CASE("derive emits the documented column order") {
  std::string out;
  CHECK(run_cli({"seq", "derive", "--seq", kConstant, "--m", "3"}, &out) == 0);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "m,r,rho,delta,gamma,P,eta");
  std::getline(lines, line);
  CHECK(line == "1,0.45,0.25,0.45,0.25,0.75,0.25");
  int rows = 1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("compat example exits 0 and a tiny tolerance exits 1") {
  std::string out;
  CHECK(run_cli({"exp", "compat", "--seq", kGeometric, "--mmax", "4"}, &out) == 0);
  CHECK(out.find("# experiment=compat_chain") == 0);
  CHECK(out.find("# pass=true") != std::string::npos);
  CHECK(run_cli({"exp", "compat", "--seq", kGeometric, "--mmax", "2", "--tol", "1e-30"}, &out) ==
        1);
  CHECK(out.find("# pass=false") != std::string::npos);
}

TEST_CASE("emitted json reports re-parse into equal reports") {
  std::string out;
  CHECK(run_cli({"exp", "compat", "--seq", kGeometric, "--mmax", "3", "--format", "json"},
                &out) == 0);
  ExperimentReport parsed = ExperimentReport::from_json(nlohmann::json::parse(out));
  CHECK(parsed == exp_compat_chain(MatchingSequence::parse(kGeometric), 3));

  CHECK(run_cli({"exp", "symmetry", "--seq", kConstant, "--m", "2", "--seed", "11", "--format",
                 "json"},
                &out) == 0);
  ExperimentReport sym = ExperimentReport::from_json(nlohmann::json::parse(out));
  CHECK(sym == exp_symmetry(MatchingSequence::parse(kConstant), 2, 11));
}

TEST_CASE("usage and configuration errors exit 2") {
  std::string out;
  CHECK(run_cli({"net", "explode"}, &out) == 2);
  CHECK(run_cli({}, &out) == 2);
  CHECK(run_cli({"net", "build", "--seq", "{not json"}, &out) == 2);
  CHECK(run_cli({"net", "build"}, &out) == 2);
  CHECK(run_cli({"net", "build", "--seq", kGeometric, "--m", "99"}, &out) == 2);
  CHECK(run_cli({"exp", "compat", "--seq", kGeometric, "--format", "yaml"}, &out) == 2);
  CHECK(run_cli({"exp", "compat", "--seq", kGeometric, "--tol", "-1"}, &out) == 2);
  CHECK(run_cli({"seq", "derive", "--seq", R"({"family":"constant","rho":1.5})"}, &out) == 2);
}

TEST_CASE("help exits 0") {
  std::string out;
  CHECK(run_cli({"--help"}, &out) == 0);
  CHECK(out.find("net") != std::string::npos);
}

TEST_CASE("net build emits the edge list in both formats") {
  std::string out;
  CHECK(run_cli({"net", "build", "--seq", kConstant, "--m", "1", "--n", "2"}, &out) == 0);
  CHECK(out.find("u,v,conductance,tag") == 0);
  ResistorNetwork net = build_ssg(MatchingSequence::parse(kConstant), 1, 2);
  CHECK(out == to_csv(net));

  CHECK(run_cli({"net", "build", "--seq", kConstant, "--m", "1", "--n", "2", "--format", "json"},
                &out) == 0);
  nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("nodes").size() == net.nodes().size());
  CHECK(j.at("edges").size() == net.edges().size());
  CHECK(j.at("edges")[0].at("conductance").get<double>() == net.edges()[0].conductance);
}

TEST_CASE("net trace matches the library trace onto the corners") {
  std::string out;
  CHECK(run_cli({"net", "trace", "--seq", kGeometric, "--m", "1"}, &out) == 0);
  ResistorNetwork net = build_ssg(MatchingSequence::parse(kGeometric), 1, 1);
  std::vector<NodeId> corners = {NodeId::vertex(Address{"", 1}), NodeId::vertex(Address{"", 2}),
                                 NodeId::vertex(Address{"", 3})};
  CHECK(out == trace(net, corners).to_csv());

  CHECK(run_cli({"net", "trace", "--seq", kGeometric, "--m", "1", "--format", "json"}, &out) ==
        0);
  nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("boundary") == nlohmann::json({":1", ":2", ":3"}));
  CHECK(j.at("matrix").size() == 3);
  CHECK(j.at("matrix")[0][0].get<double>() == trace(net, corners).matrix()(0, 0));
}

TEST_CASE("net diameter prints the triangle value at level 0") {
  std::string out;
  CHECK(run_cli({"net", "diameter", "--seq", kConstant, "--m", "0"}, &out) == 0);
  CHECK(out == "0.6666666667\n");
  CHECK(run_cli({"net", "diameter", "--seq", kConstant, "--m", "0", "--format", "json"}, &out) ==
        0);
  CHECK(nlohmann::json::parse(out).at("diameter").get<double>() ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("seq project emits a reusable sequence") {
  std::string out;
  CHECK(run_cli({"seq", "project", "--seq", kConstant, "--m", "5"}, &out) == 0);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "m,sigma");
  std::getline(lines, line);
  CHECK(line == "1,0.25");

  CHECK(run_cli({"seq", "project", "--seq", kGeometric, "--m", "5", "--format", "json"}, &out) ==
        0);
  MatchingSequence sigma = MatchingSequence::from_json(nlohmann::json::parse(out));
  CHECK(sigma.rho(1) == doctest::Approx(0.7030253522835557).epsilon(1e-12));
}

TEST_CASE("only the --out path is written and stdout stays empty") {
  std::filesystem::path path =
      std::filesystem::temp_directory_path() / "ssgforms_cli_out_test.csv";
  std::filesystem::remove(path);
  std::string out;
  CHECK(run_cli({"seq", "derive", "--seq", kConstant, "--m", "2", "--out", path.string()},
                &out) == 0);
  CHECK(out.empty());
  std::string direct;
  CHECK(run_cli({"seq", "derive", "--seq", kConstant, "--m", "2"}, &direct) == 0);
  CHECK(slurp(path) == direct);
  std::filesystem::remove(path);
}

TEST_CASE("the level cap honors SSG_MAX_LEVEL") {
  std::string out;
  setenv("SSG_MAX_LEVEL", "2", 1);
  CHECK(run_cli({"net", "build", "--seq", kConstant, "--m", "3"}, &out) == 2);
  setenv("SSG_MAX_LEVEL", "3", 1);
  CHECK(run_cli({"net", "build", "--seq", kConstant, "--m", "3"}, &out) == 0);
  unsetenv("SSG_MAX_LEVEL");
}
