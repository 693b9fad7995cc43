#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mfg {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the eight acceptance criteria on the benchmark instance, printing one
// PASS/FAIL line per criterion to `log`. tol_scale > 1 loosens every
// threshold proportionally (diagnostic runs only).
std::vector<CriterionResult> run_acceptance(std::ostream& log, double tol_scale = 1.0);

}  // namespace mfg
