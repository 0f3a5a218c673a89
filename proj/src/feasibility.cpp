#include "ssbc/feasibility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ssbc/specfun.hpp"

namespace ssbc {

namespace {

void require_inputs(int n, double delta) { CalibrationContext{n, 0.5, delta}.validate(); }

void require_window(int m) {
  if (m < 1) throw std::invalid_argument("window size m must be >= 1, got " + std::to_string(m));
}

}  // namespace

double alpha_star_infinite(int n, double delta) {
  require_inputs(n, delta);
  return -std::expm1(std::log(delta) / n);
}

GridImplementability grid_implementable(int n, double delta) {
  require_inputs(n, delta);
  const double delta_max = std::exp(n * std::log1p(-1.0 / (n + 1.0)));
  return {delta <= delta_max, delta_max};
}

double alpha_star_laplace(int n, double delta, int m) {
  require_window(m);
  const double a0 = alpha_star_infinite(n, delta);
  return a0 + std::sqrt(a0 * (1.0 - a0) / (2.0 * std::numbers::pi * m));
}

double alpha_star_exact_finite(int n, double delta, int m) {
  require_inputs(n, delta);
  require_window(m);
  const std::vector<double> pmf = betabinom_pmf_table(BetaBinomialParams{m, double(n), 1.0});
  // Scan thresholds downward; the running upper-tail sum is Pr(X >= x).
  long double upper = 0.0L;
  for (int x = m; x >= 0; --x) {
    upper += pmf[static_cast<std::size_t>(x)];
    if (x == 0 || static_cast<double>(upper) >= 1.0 - delta) {
      return 1.0 - static_cast<double>(x) / m;
    }
  }
  return 1.0;  // unreachable: Pr(X >= 0) = 1
}

FeasibilityReport feasibility_report(int n, double delta, std::optional<int> m) {
  FeasibilityReport rep;
  rep.n = n;
  rep.delta = delta;
  rep.m = m;
  rep.alpha_star_inf = alpha_star_infinite(n, delta);
  const GridImplementability grid = grid_implementable(n, delta);
  rep.delta_max_grid = grid.delta_max;
  rep.implementable = grid.implementable;
  if (m) {
    rep.alpha_star_m = alpha_star_exact_finite(n, delta, *m);
    rep.alpha_star_m_laplace = alpha_star_laplace(n, delta, *m);
  }
  return rep;
}

RungTable rung_table(int n, double alpha_target, const CoverageRegime& regime) {
  CalibrationContext{n, alpha_target, 0.5}.validate();
  RungTable table;
  table.n = n;
  table.alpha_target = alpha_target;
  table.regime = regime;
  table.rungs.reserve(static_cast<std::size_t>(n));
  for (int u = 1; u <= n; ++u) {
    const CoverageLaw law = coverage_law_at_rung(u, n, regime);
    table.rungs.push_back({u, u / (n + 1.0), violation_prob(law, alpha_target)});
  }
  return table;
}

SlopeFit fit_finite_window_slope(int n, double delta, std::span<const int> windows) {
  if (windows.empty()) throw std::invalid_argument("fit_finite_window_slope: no windows given");
  SlopeFit fit;
  const double a0 = alpha_star_infinite(n, delta);
  double sxy = 0.0;
  double sxx = 0.0;
  for (const int m : windows) {
    const double gap = alpha_star_exact_finite(n, delta, m) - a0;
    const double x = 1.0 / std::sqrt(static_cast<double>(m));
    fit.windows.push_back(m);
    fit.gaps.push_back(gap);
    sxy += x * gap;
    sxx += x * x;
  }
  fit.slope = sxy / sxx;
  fit.expected_slope = std::sqrt(a0 * (1.0 - a0) / (2.0 * std::numbers::pi));
  fit.ratio = fit.slope / fit.expected_slope;
  return fit;
}

}  // namespace ssbc
