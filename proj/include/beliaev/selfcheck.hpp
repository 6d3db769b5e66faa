#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beliaev {

// Built-in oracle suite: closed forms vs quadrature, coordinate-scheme
// agreement, Feshbach formula vs dense solve, series remainders, the small-s
// coincidence lemma, the Sigma(0) limit constant, the damping-constant
// reconciliation and the Herglotz sign property.  Each item prints one
// PASS/FAIL line with its measured deviation.
struct SelfcheckItem {
  std::string name;
  bool pass = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct SelfcheckReport {
  std::vector<SelfcheckItem> items;
  bool all_pass() const;
};

// `tamper` perturbs the named item's reference constant by 1e-6; a negative
// control hook for exercising the harness, never used in normal runs.
SelfcheckReport run_selfcheck(int threads = 1, const std::string& tamper = "");

void print_selfcheck(const SelfcheckReport& report, std::ostream& os);

}  // namespace beliaev
