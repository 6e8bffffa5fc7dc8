// Acceptance run: one PASS/FAIL line per criterion, exit 3 if any fails.
#include <cstdlib>
#include <iostream>
#include <string>

#include "dwlab/verify.hpp"

int main(int argc, char** argv) {
  dwlab::AcceptanceSuite suite;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) ids = dwlab::AcceptanceSuite::ids();

  int failed = 0;
  for (int id : ids) {
    const dwlab::CriterionResult r = suite.run(id);
    std::cout << dwlab::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 3;
}
