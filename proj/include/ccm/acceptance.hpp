#pragma once

#include <string>
#include <vector>

namespace ccm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double wall_ms = 0.0;
};

// Runs the full verification suite; one result per criterion.
std::vector<CriterionResult> run_acceptance();

}  // namespace ccm
