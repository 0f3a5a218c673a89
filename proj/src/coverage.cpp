#include "ssbc/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssbc/specfun.hpp"

namespace ssbc {

namespace {

constexpr double kSnapTolerance = 1e-12;

bool near_integer(double x, double& nearest) {
  nearest = std::round(x);
  return std::fabs(x - nearest) <= kSnapTolerance * std::max(1.0, std::fabs(x));
}

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1), got " +
                                std::to_string(v));
  }
}

void require_n(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1, got " + std::to_string(n));
}

}  // namespace

CoverageRegime CoverageRegime::window(int m) {
  if (m < 1) throw std::invalid_argument("window size m must be >= 1, got " + std::to_string(m));
  return {Kind::FiniteWindow, m};
}

std::string CoverageRegime::label() const { return is_window() ? "window" : "inf"; }

void CalibrationContext::validate() const {
  require_n(n);
  require_open_unit(alpha_target, "alpha_target");
  require_open_unit(delta, "delta");
}

long long snapped_ceil(double x) {
  double nearest = 0.0;
  if (near_integer(x, nearest)) return static_cast<long long>(nearest);
  return static_cast<long long>(std::ceil(x));
}

long long snapped_floor(double x) {
  double nearest = 0.0;
  if (near_integer(x, nearest)) return static_cast<long long>(nearest);
  return static_cast<long long>(std::floor(x));
}

int order_index(double alpha, int n) {
  require_open_unit(alpha, "alpha");
  require_n(n);
  const long long k = snapped_ceil((1.0 - alpha) * (n + 1.0));
  return static_cast<int>(std::clamp<long long>(k, 1, n + 1LL));
}

int grid_index(double alpha_prime, int n) {
  require_n(n);
  const double scaled = alpha_prime * (n + 1.0);
  const long long u = std::llround(scaled);
  if (!(std::fabs(static_cast<double>(u) / (n + 1.0) - alpha_prime) <= kSnapTolerance)) {
    throw std::invalid_argument("alpha_prime=" + std::to_string(alpha_prime) +
                                " is not on the grid {u/(n+1)} for n=" + std::to_string(n));
  }
  return static_cast<int>(u);
}

int largest_rung_below(double alpha_target, int n) {
  require_n(n);
  const long long u = snapped_ceil(alpha_target * (n + 1.0)) - 1;
  return static_cast<int>(std::clamp<long long>(u, 0, n));
}

CoverageLaw coverage_law_at_rung(int u, int n, const CoverageRegime& regime) {
  require_n(n);
  if (u < 1 || u > n) {
    // u = n+1 would give a = 0, u = 0 gives b = 0; neither is a Beta law.
    throw std::invalid_argument("grid index u must lie in [1, " + std::to_string(n) +
                                "], got " + std::to_string(u));
  }
  return {n + 1 - u, u, regime};
}

CoverageLaw coverage_law(double alpha_prime, int n, const CoverageRegime& regime) {
  return coverage_law_at_rung(grid_index(alpha_prime, n), n, regime);
}

int window_success_threshold(double alpha_target, int m) {
  require_open_unit(alpha_target, "alpha_target");
  if (m < 1) throw std::invalid_argument("window size m must be >= 1, got " + std::to_string(m));
  return static_cast<int>(std::clamp<long long>(snapped_ceil((1.0 - alpha_target) * m), 0, m));
}

double tail_prob(const CoverageLaw& law, double alpha_target) {
  require_open_unit(alpha_target, "alpha_target");
  if (!law.regime.is_window()) {
    return beta_survival(1.0 - alpha_target, BetaParams{double(law.a), double(law.b)});
  }
  const int x_star = window_success_threshold(alpha_target, law.regime.m);
  return betabinom_survival(x_star, BetaBinomialParams{law.regime.m, double(law.a), double(law.b)});
}

double violation_prob(const CoverageLaw& law, double alpha_target) {
  require_open_unit(alpha_target, "alpha_target");
  if (!law.regime.is_window()) {
    return reg_inc_beta(1.0 - alpha_target, BetaParams{double(law.a), double(law.b)});
  }
  const int x_star = window_success_threshold(alpha_target, law.regime.m);
  return betabinom_cdf(x_star - 1, BetaBinomialParams{law.regime.m, double(law.a), double(law.b)});
}

}  // namespace ssbc
