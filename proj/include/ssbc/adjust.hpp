#pragma once

// Level adjustments that turn the marginal split-conformal guarantee into a
// training-conditional one: the exact-law grid search (SSBC) and the
// DKW-Massart concentration baseline.

#include <optional>
#include <string>
#include <vector>

#include "ssbc/coverage.hpp"

namespace ssbc {

enum class Method { SSBC, DKWM };

std::string to_string(Method method);

struct AdjustmentReport {
  bool feasible = false;
  // Grid level u*/(n+1) for SSBC; the continuous alpha_target - epsilon for DKWM.
  std::optional<double> alpha_adj;
  // Rung of the returned level. For DKWM this is the rung the order statistic
  // snaps to, n+1-order_index(alpha_adj); 0 means the everything-set.
  // 0 for infeasible SSBC reports.
  int u_star = 0;
  // Pr(C >= 1 - alpha_target) at the returned rung. Infeasible SSBC reports
  // carry the u=1 rung's value, the best any rung can do.
  double achieved_tail = 0.0;
  double achieved_violation = 1.0;
  Method method = Method::SSBC;
  CalibrationContext context;
  CoverageRegime regime;
  std::optional<double> epsilon;  // DKWM only
  std::vector<int> skipped_rungs;  // rungs passed over as degenerate
  std::vector<std::string> notes;
};

/// Largest grid level u/(n+1) < alpha_target whose coverage tail meets
/// 1 - delta. Searches downward from the top eligible rung and stops at the
/// first pass, which is valid because the tail is nonincreasing in u.
AdjustmentReport ssbc_adjust(const CalibrationContext& ctx, const CoverageRegime& regime);

/// Same result as ssbc_adjust by scanning every rung; kept as a cross-check.
AdjustmentReport ssbc_adjust_full_scan(const CalibrationContext& ctx,
                                       const CoverageRegime& regime);

/// One-sided DKW-Massart margin sqrt(ln(1/delta) / (2n)).
double dkwm_epsilon(int n, double delta);

AdjustmentReport dkwm_adjust(const CalibrationContext& ctx);

}  // namespace ssbc
