#include <iostream>

#include "hamdistill/acceptance.hpp"

int main() {
  int failed = 0, total = 0;
  hd::run_acceptance([&](const hd::CriterionResult& r) {
    ++total;
    failed += r.pass ? 0 : 1;
    std::cout << hd::format_result(r) << std::endl;
  });
  std::cout << (total - failed) << "/" << total << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
