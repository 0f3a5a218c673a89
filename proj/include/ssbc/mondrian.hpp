#pragma once

// Window-level, class-conditional guarantee under class-prevalence
// uncertainty.
//
// For one class j: the class count in a window of m items is
// Beta-Binomial(m; k_j, k - k_j) (prevalence confidence distribution from
// k training items, k_j of them in class j), and given m_j = r the number of
// class-j miscoverages is Beta-Binomial(r; s_j, n_j - s_j), where s_j is the
// miscoverage count implied by the conformal cutoff on n_j calibration items.
// A window succeeds when e_j <= floor(alpha_target * m_j).

#include <stdexcept>
#include <vector>

#include "ssbc/adjust.hpp"

namespace ssbc {

class DegenerateParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MondrianSpec {
  int k = 1;    // training size
  int k_j = 0;  // class-j training count
  int n_j = 1;  // class-j calibration size
  int m = 1;    // window size
  double alpha_target = 0.1;
  double delta = 0.1;

  void validate() const;
};

/// s_j = n_j - ceil((1 - alpha)(n_j + 1)) + 1; 0 means the everything-set.
int miscoverage_count(double alpha, int n_j);

/// Integer error budget floor(alpha * r) for a window holding r class items.
int budget_cap(double alpha, int r);

/// Pr(m_j = r), r = 0..m. Point masses at r = 0 (k_j = 0) or r = m (k_j = k).
std::vector<double> class_count_predictive(const MondrianSpec& spec);

/// Pr(e_j = e | m_j = r) = C(r,e) B(e + s_j, r - e + n_j - s_j) / B(s_j, n_j - s_j).
/// Throws DegenerateParameterError unless 1 <= s_j <= n_j - 1.
double error_count_conditional(int e, int r, int s_j, int n_j);

/// Dense joint law of (e_j, m_j) over the triangle 0 <= e <= r <= m.
class JointPredictive {
 public:
  JointPredictive(int m, int s_j, int n_j, std::vector<double> class_counts);

  int window() const { return m_; }
  int s_j() const { return s_j_; }
  int n_j() const { return n_j_; }

  /// Pr(e_j = e, m_j = r); zero when e > r.
  double at(int e, int r) const;

  /// Pr(m_j = r), recovered by summing the joint over e.
  std::vector<double> marginal_class_count() const;
  std::vector<double> marginal_error_count() const;
  double total_mass() const;

 private:
  int m_;
  int s_j_;
  int n_j_;
  std::vector<double> cells_;  // row r holds e = 0..m, row-major
};

JointPredictive joint_predictive(const MondrianSpec& spec, double alpha_for_s);

/// p_good = sum_r Pr(m_j = r) Pr(e_j <= floor(alpha_target r) | m_j = r), with
/// the error law taken at the grid level alpha_prime = u/(n_j + 1).
double budget_success_prob(const MondrianSpec& spec, double alpha_prime);

/// Largest grid level u/(n_j+1) < alpha_target with p_good >= 1 - delta.
/// Rungs with degenerate s_j are skipped and listed in skipped_rungs.
AdjustmentReport ssbc_mondrian(const MondrianSpec& spec);

}  // namespace ssbc
