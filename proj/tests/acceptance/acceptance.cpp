// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.
#include <cstring>
#include <iostream>

#include "rmf/checks/suite.hpp"

int main(int argc, char** argv) {
  rmf::checks::SuiteOptions o;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) o.quick = true;
  }
  const auto results = rmf::checks::run_acceptance(o);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << rmf::checks::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }
  std::cout << (failed ? std::to_string(failed) + " of 10 criteria failed" : "all 10 criteria passed") << std::endl;
  return failed ? 1 : 0;
}
