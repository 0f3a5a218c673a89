#pragma once

// Special functions behind the coverage laws: log-gamma, log-beta, the
// regularized incomplete beta function and the Beta-Binomial distribution.
//
// Everything here is a pure function of its arguments and safe to call from
// any number of threads. Invalid arguments raise std::domain_error.

#include <vector>

namespace ssbc {

struct BetaParams {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

struct BetaBinomialParams {
  int m = 1;
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// ln B(a, b). Relative error stays below 1e-12 up to a, b ~ 1e6.
double log_beta(double a, double b);

/// I_x(a, b), the CDF of Beta(a, b) at x.
double reg_inc_beta(double x, const BetaParams& p);

/// Pr(Z >= t) for Z ~ Beta(a, b). Evaluated directly rather than as
/// 1 - I_t(a, b), so it keeps full relative accuracy in the upper tail.
double beta_survival(double t, const BetaParams& p);

double betabinom_log_pmf(int r, const BetaBinomialParams& p);
double betabinom_pmf(int r, const BetaBinomialParams& p);

/// All m+1 probabilities Pr(X = r), r = 0..m.
std::vector<double> betabinom_pmf_table(const BetaBinomialParams& p);

/// Pr(X >= x_star) for 0 <= x_star <= m+1.
double betabinom_survival(int x_star, const BetaBinomialParams& p);

/// Pr(X <= x) for -1 <= x <= m.
double betabinom_cdf(int x, const BetaBinomialParams& p);

}  // namespace ssbc
