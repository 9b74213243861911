#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crgg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance suite, streaming one PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(unsigned threads, std::ostream& log);

}  // namespace crgg
