#include "ssbc/mondrian.hpp"

#include <algorithm>
#include <string>

#include "ssbc/specfun.hpp"

namespace ssbc {

namespace {

bool degenerate(int s_j, int n_j) { return s_j <= 0 || s_j >= n_j; }

void require_nondegenerate(int s_j, int n_j) {
  if (degenerate(s_j, n_j)) {
    throw DegenerateParameterError("miscoverage count s_j=" + std::to_string(s_j) +
                                   " must lie in [1, n_j-1] with n_j=" + std::to_string(n_j) +
                                   "; Beta(s_j, n_j - s_j) is undefined");
  }
}

// Pr(e_j <= cap | m_j = r).
double conditional_budget_prob(int cap, int r, int s_j, int n_j) {
  if (r == 0 || cap >= r) return 1.0;
  if (cap < 0) return 0.0;
  return betabinom_cdf(cap, BetaBinomialParams{r, double(s_j), double(n_j - s_j)});
}

}  // namespace

void MondrianSpec::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
  if (k_j < 0 || k_j > k) {
    throw std::invalid_argument("k_j must lie in [0, k=" + std::to_string(k) + "], got " +
                                std::to_string(k_j));
  }
  if (m < 1) throw std::invalid_argument("window size m must be >= 1, got " + std::to_string(m));
  CalibrationContext{n_j, alpha_target, delta}.validate();
}

int miscoverage_count(double alpha, int n_j) { return n_j - order_index(alpha, n_j) + 1; }

int budget_cap(double alpha, int r) {
  if (r < 0) throw std::invalid_argument("budget_cap: r must be >= 0");
  return static_cast<int>(snapped_floor(alpha * r));
}

std::vector<double> class_count_predictive(const MondrianSpec& spec) {
  spec.validate();
  if (spec.k_j == 0 || spec.k_j == spec.k) {
    std::vector<double> point(static_cast<std::size_t>(spec.m) + 1, 0.0);
    point[spec.k_j == 0 ? 0 : static_cast<std::size_t>(spec.m)] = 1.0;
    return point;
  }
  return betabinom_pmf_table(BetaBinomialParams{spec.m, double(spec.k_j), double(spec.k - spec.k_j)});
}

double error_count_conditional(int e, int r, int s_j, int n_j) {
  require_nondegenerate(s_j, n_j);
  if (r < 0 || e < 0 || e > r) {
    throw std::domain_error("error_count_conditional: need 0 <= e <= r, got e=" +
                            std::to_string(e) + ", r=" + std::to_string(r));
  }
  if (r == 0) return 1.0;
  return betabinom_pmf(e, BetaBinomialParams{r, double(s_j), double(n_j - s_j)});
}

JointPredictive::JointPredictive(int m, int s_j, int n_j, std::vector<double> class_counts)
    : m_(m), s_j_(s_j), n_j_(n_j) {
  require_nondegenerate(s_j, n_j);
  if (m < 1 || class_counts.size() != static_cast<std::size_t>(m) + 1) {
    throw std::invalid_argument("JointPredictive: class-count law must have m+1 entries");
  }
  const auto width = static_cast<std::size_t>(m) + 1;
  cells_.assign(width * width, 0.0);
  for (int r = 0; r <= m; ++r) {
    const double pr = class_counts[static_cast<std::size_t>(r)];
    if (pr == 0.0) continue;
    for (int e = 0; e <= r; ++e) {
      cells_[static_cast<std::size_t>(r) * width + static_cast<std::size_t>(e)] =
          pr * error_count_conditional(e, r, s_j, n_j);
    }
  }
}

double JointPredictive::at(int e, int r) const {
  if (r < 0 || r > m_ || e < 0 || e > m_) {
    throw std::out_of_range("JointPredictive::at: index outside 0..m");
  }
  const auto width = static_cast<std::size_t>(m_) + 1;
  return cells_[static_cast<std::size_t>(r) * width + static_cast<std::size_t>(e)];
}

std::vector<double> JointPredictive::marginal_class_count() const {
  std::vector<double> out(static_cast<std::size_t>(m_) + 1);
  for (int r = 0; r <= m_; ++r) {
    long double acc = 0.0L;
    for (int e = 0; e <= r; ++e) acc += at(e, r);
    out[static_cast<std::size_t>(r)] = static_cast<double>(acc);
  }
  return out;
}

std::vector<double> JointPredictive::marginal_error_count() const {
  std::vector<long double> acc(static_cast<std::size_t>(m_) + 1, 0.0L);
  for (int r = 0; r <= m_; ++r) {
    for (int e = 0; e <= r; ++e) acc[static_cast<std::size_t>(e)] += at(e, r);
  }
  return {acc.begin(), acc.end()};
}

double JointPredictive::total_mass() const {
  long double acc = 0.0L;
  for (int r = 0; r <= m_; ++r) {
    for (int e = 0; e <= r; ++e) acc += at(e, r);
  }
  return static_cast<double>(acc);
}

JointPredictive joint_predictive(const MondrianSpec& spec, double alpha_for_s) {
  spec.validate();
  const int s_j = miscoverage_count(alpha_for_s, spec.n_j);
  return JointPredictive(spec.m, s_j, spec.n_j, class_count_predictive(spec));
}

double budget_success_prob(const MondrianSpec& spec, double alpha_prime) {
  spec.validate();
  grid_index(alpha_prime, spec.n_j);
  const int s_j = miscoverage_count(alpha_prime, spec.n_j);
  require_nondegenerate(s_j, spec.n_j);
  const std::vector<double> counts = class_count_predictive(spec);
  long double acc = 0.0L;
  for (int r = 0; r <= spec.m; ++r) {
    const double pr = counts[static_cast<std::size_t>(r)];
    if (pr == 0.0) continue;
    acc += pr * conditional_budget_prob(budget_cap(spec.alpha_target, r), r, s_j, spec.n_j);
  }
  return std::clamp(static_cast<double>(acc), 0.0, 1.0);
}

AdjustmentReport ssbc_mondrian(const MondrianSpec& spec) {
  spec.validate();
  AdjustmentReport rep;
  rep.method = Method::SSBC;
  rep.context = CalibrationContext{spec.n_j, spec.alpha_target, spec.delta};
  rep.regime = CoverageRegime::window(spec.m);

  const int n_j = spec.n_j;
  const int u_max = largest_rung_below(spec.alpha_target, n_j);
  for (int u = 1; u <= u_max; ++u) {
    if (degenerate(miscoverage_count(u / (n_j + 1.0), n_j), n_j)) rep.skipped_rungs.push_back(u);
  }
  if (!rep.skipped_rungs.empty()) {
    rep.notes.push_back("skipped " + std::to_string(rep.skipped_rungs.size()) +
                        " rung(s) with degenerate s_j (Beta(s_j, n_j - s_j) undefined)");
  }

  auto is_skipped = [&](int u) {
    return std::find(rep.skipped_rungs.begin(), rep.skipped_rungs.end(), u) !=
           rep.skipped_rungs.end();
  };
  int lowest_usable = 0;
  double lowest_tail = 0.0;
  for (int u = u_max; u >= 1; --u) {
    if (is_skipped(u)) continue;
    const double alpha_prime = u / (n_j + 1.0);
    const double p_good = budget_success_prob(spec, alpha_prime);
    if (p_good >= 1.0 - spec.delta) {
      rep.feasible = true;
      rep.u_star = u;
      rep.alpha_adj = alpha_prime;
      rep.achieved_tail = p_good;
      rep.achieved_violation = 1.0 - p_good;
      return rep;
    }
    lowest_usable = u;
    lowest_tail = p_good;
  }

  rep.feasible = false;
  rep.u_star = 0;
  if (u_max < 1) {
    rep.notes.push_back("no grid level u/(n_j+1) lies below alpha_target");
  } else if (lowest_usable == 0) {
    rep.notes.push_back("every rung below alpha_target has degenerate s_j");
  } else {
    rep.achieved_tail = lowest_tail;
    rep.achieved_violation = 1.0 - lowest_tail;
    rep.notes.push_back("rung u=" + std::to_string(lowest_usable) + " reaches p_good " +
                        std::to_string(lowest_tail) + " < 1 - delta");
  }
  return rep;
}

}  // namespace ssbc
