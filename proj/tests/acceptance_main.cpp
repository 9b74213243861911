#include "crgg/acceptance.hpp"

#include <iostream>

int main() {
  const auto results = crgg::run_acceptance(0, std::cout);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failed;
  }
  return failed;
}
