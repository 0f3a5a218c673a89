#pragma once

// Attainability limits for a calibration size n and risk delta.

#include <optional>
#include <span>
#include <vector>

#include "ssbc/coverage.hpp"

namespace ssbc {

/// Smallest certifiable target with an infinite test set, 1 - delta^(1/n).
double alpha_star_infinite(int n, double delta);

struct GridImplementability {
  bool implementable = false;
  double delta_max = 0.0;  // (n/(n+1))^n
};

/// Whether alpha_star_infinite reaches the first grid level 1/(n+1),
/// equivalently delta <= (n/(n+1))^n.
GridImplementability grid_implementable(int n, double delta);

/// First-order large-m approximation of the finite-window threshold.
double alpha_star_laplace(int n, double delta, int m);

/// Exact finite-window threshold at the u=1 rung, where the covered count is
/// Beta-Binomial(m; n, 1). The tail is a step function of alpha; the result
/// is the left edge 1 - x*/m of the passing step, x* being the largest
/// threshold with Pr(X >= x*) >= 1 - delta.
double alpha_star_exact_finite(int n, double delta, int m);

struct FeasibilityReport {
  int n = 1;
  double delta = 0.1;
  std::optional<int> m;
  double alpha_star_inf = 0.0;
  std::optional<double> alpha_star_m;
  std::optional<double> alpha_star_m_laplace;
  double delta_max_grid = 0.0;
  bool implementable = false;
};

FeasibilityReport feasibility_report(int n, double delta, std::optional<int> m = std::nullopt);

struct Rung {
  int u = 0;
  double alpha_prime = 0.0;
  double attainable_delta = 0.0;
};

struct RungTable {
  int n = 1;
  double alpha_target = 0.1;
  CoverageRegime regime;
  std::vector<Rung> rungs;  // u = 1..n
};

RungTable rung_table(int n, double alpha_target, const CoverageRegime& regime);

struct SlopeFit {
  std::vector<int> windows;
  std::vector<double> gaps;  // alpha_star_exact_finite - alpha_star_infinite
  double slope = 0.0;         // least squares through the origin on (1/sqrt(m), gap)
  double expected_slope = 0.0;  // sqrt(a0 (1 - a0) / (2 pi))
  double ratio = 0.0;
};

SlopeFit fit_finite_window_slope(int n, double delta, std::span<const int> windows);

}  // namespace ssbc
