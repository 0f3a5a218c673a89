#pragma once

// Seeded Monte Carlo check of split-conformal coverage.
//
// Each run draws n calibration and m test nonconformity scores, thresholds at
// the order statistic each method prescribes, and records how many of the m
// test scores are covered. Run i draws from its own generator seeded from
// (seed, i), so results do not depend on how runs are spread over threads.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssbc {

enum class ScoreModel { AbsCauchy, AbsNormal, Uniform };
enum class SimMethod { None, SSBC, DKWM };

std::string to_string(ScoreModel model);
std::string to_string(SimMethod method);
ScoreModel parse_score_model(const std::string& name);
SimMethod parse_sim_method(const std::string& name);

struct SimConfig {
  int n = 50;
  int m = 100;
  double alpha_target = 0.1;
  double delta = 0.1;
  std::int64_t runs = 100000;
  std::uint64_t seed = 42;
  ScoreModel score_model = ScoreModel::AbsCauchy;
  std::vector<SimMethod> methods{SimMethod::None, SimMethod::SSBC};

  void validate() const;
};

struct MethodResult {
  SimMethod method = SimMethod::None;
  bool skipped = false;
  std::vector<std::string> notes;
  double alpha_used = 0.0;
  std::optional<int> u_star;
  int order_index = 0;  // k; n+1 denotes the everything-set
  std::int64_t violations = 0;
  double empirical_violation_rate = 0.0;
  double theory_violation_rate = 0.0;
  std::vector<std::int64_t> coverage_histogram;  // index c counts windows with c/m coverage
  std::vector<double> theory_pmf;
  double total_variation = 0.0;
};

struct SimReport {
  SimConfig config;
  std::vector<MethodResult> methods;
  std::int64_t runs_completed = 0;
  std::uint64_t seed_echo = 0;
};

/// Per-run generator (SplitMix64) keyed on (seed, run index).
class RunRng {
 public:
  RunRng(std::uint64_t seed, std::uint64_t run_index);

  std::uint64_t next();
  /// Uniform on the open interval (0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

double draw_score(ScoreModel model, RunRng& rng);

/// k-th smallest score with k = ceil((1 - alpha)(n + 1)); +infinity when
/// k = n + 1. Throws std::invalid_argument on an empty score list.
double split_conformal_threshold(std::span<const double> scores, double alpha);

/// Beta-Binomial law of the covered count implied by calibrating at level
/// method_alpha: shapes (k, n+1-k) with k = order_index(method_alpha, n).
std::vector<double> theory_overlay(const SimConfig& config, double method_alpha);

double total_variation(std::span<const std::int64_t> histogram, std::span<const double> pmf);

/// Worker count from SSBC_THREADS, else hardware concurrency.
unsigned default_worker_count();

/// workers = 0 picks default_worker_count(). The report does not depend on it.
SimReport run_simulation(const SimConfig& config, unsigned workers = 0);

}  // namespace ssbc
