#include "cli.hpp"

int main(int argc, char** argv) { return ssg::cli::run(argc, argv); }
