#pragma once

// Finite-sample laws of split-conformal coverage.
//
// With n calibration scores and order statistic k, infinite-test coverage is
// Beta(k, n+1-k); over a window of m fresh points the covered count is
// Beta-Binomial(m; k, n+1-k). Grid level u/(n+1) maps to shapes (n+1-u, u).

#include <string>

namespace ssbc {

struct CoverageRegime {
  enum class Kind { InfiniteTest, FiniteWindow };

  Kind kind = Kind::InfiniteTest;
  int m = 0;  // window size, meaningful only for FiniteWindow

  static CoverageRegime infinite() { return {Kind::InfiniteTest, 0}; }
  static CoverageRegime window(int m);

  bool is_window() const { return kind == Kind::FiniteWindow; }
  std::string label() const;  // "inf" or "window"

  friend bool operator==(const CoverageRegime&, const CoverageRegime&) = default;
};

struct CalibrationContext {
  int n = 1;
  double alpha_target = 0.1;
  double delta = 0.1;

  void validate() const;
};

struct CoverageLaw {
  int a = 1;
  int b = 1;
  CoverageRegime regime;
};

// ceil/floor that treat values within ~1e-12 relative of an integer as that
// integer, so products like (1 - 2/51) * 51 land on 49 and not 50.
long long snapped_ceil(double x);
long long snapped_floor(double x);

/// k = ceil((1 - alpha)(n + 1)), in 1..n+1.
int order_index(double alpha, int n);

/// Recovers u from a grid level alpha_prime = u/(n+1); throws
/// std::invalid_argument when alpha_prime is not on the grid.
int grid_index(double alpha_prime, int n);

/// Largest u in 0..n with u/(n+1) strictly below alpha_target.
int largest_rung_below(double alpha_target, int n);

CoverageLaw coverage_law(double alpha_prime, int n, const CoverageRegime& regime);
CoverageLaw coverage_law_at_rung(int u, int n, const CoverageRegime& regime);

/// Success threshold x* = ceil((1 - alpha_target) m) on the covered count.
int window_success_threshold(double alpha_target, int m);

/// Pr(C >= 1 - alpha_target) under the law; the per-rung p(u) of SSBC.
double tail_prob(const CoverageLaw& law, double alpha_target);

/// Pr(C < 1 - alpha_target), computed directly instead of as 1 - tail_prob.
double violation_prob(const CoverageLaw& law, double alpha_target);

}  // namespace ssbc
