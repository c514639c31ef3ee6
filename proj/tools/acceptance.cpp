#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "multiegs/suite.hpp"

/// acceptance [criterion ...]: runs the listed criteria (all when none given).
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  multiegs::SuiteConfig cfg;
  bool ok = true;
  for (int id : ids) {
    const auto r = multiegs::run_criterion(id, cfg);
    std::cout << multiegs::format_criterion(r) << std::flush;
    ok = ok && r.pass;
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
