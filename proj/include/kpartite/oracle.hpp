#pragma once

#include <string>
#include <vector>

#include "kpartite/model.hpp"

namespace kpartite {

struct OracleCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Exhaustive small-instance identity checks: every separation statistic
// computed from contingency tables is compared against its matrix-definition
// form, together with the inner-product and block-distance identities and the
// positivity/equality cases. Integer palettes keep the comparisons exact.
std::vector<OracleCheck> run_oracle_checks();

}  // namespace kpartite
