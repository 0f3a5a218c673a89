#include "ssbc/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ssbc/adjust.hpp"
#include "ssbc/coverage.hpp"
#include "ssbc/specfun.hpp"

namespace ssbc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Level, threshold index and success cutoff that a method uses in every run.
struct MethodPlan {
  MethodResult result;
  int k = 0;
  int x_star = 0;
};

MethodPlan plan_method(const SimConfig& cfg, SimMethod method) {
  MethodPlan plan;
  plan.result.method = method;
  const CalibrationContext ctx{cfg.n, cfg.alpha_target, cfg.delta};
  switch (method) {
    case SimMethod::None:
      plan.result.alpha_used = cfg.alpha_target;
      break;
    case SimMethod::SSBC: {
      const AdjustmentReport rep = ssbc_adjust(ctx, CoverageRegime::window(cfg.m));
      if (!rep.feasible) {
        plan.result.skipped = true;
        plan.result.notes = rep.notes;
        plan.result.notes.insert(plan.result.notes.begin(), "ssbc infeasible; method skipped");
        return plan;
      }
      plan.result.alpha_used = *rep.alpha_adj;
      plan.result.u_star = rep.u_star;
      break;
    }
    case SimMethod::DKWM: {
      const AdjustmentReport rep = dkwm_adjust(ctx);
      if (!rep.feasible) {
        plan.result.skipped = true;
        plan.result.notes = rep.notes;
        plan.result.notes.insert(plan.result.notes.begin(), "dkwm infeasible; method skipped");
        return plan;
      }
      plan.result.alpha_used = *rep.alpha_adj;
      plan.result.u_star = rep.u_star;
      break;
    }
  }
  plan.k = order_index(plan.result.alpha_used, cfg.n);
  plan.result.order_index = plan.k;
  plan.x_star = window_success_threshold(cfg.alpha_target, cfg.m);
  plan.result.theory_pmf = theory_overlay(cfg, plan.result.alpha_used);
  if (plan.k == cfg.n + 1) {
    plan.result.theory_violation_rate = 0.0;
  } else {
    plan.result.theory_violation_rate =
        violation_prob(CoverageLaw{plan.k, cfg.n + 1 - plan.k, CoverageRegime::window(cfg.m)},
                       cfg.alpha_target);
  }
  plan.result.coverage_histogram.assign(static_cast<std::size_t>(cfg.m) + 1, 0);
  return plan;
}

using Histograms = std::vector<std::vector<std::int64_t>>;

void simulate_block(const SimConfig& cfg, const std::vector<int>& ks, std::int64_t first,
                    std::int64_t last, Histograms& hist) {
  std::vector<double> cal(static_cast<std::size_t>(cfg.n));
  std::vector<double> test(static_cast<std::size_t>(cfg.m));
  for (std::int64_t run = first; run < last; ++run) {
    RunRng rng(cfg.seed, static_cast<std::uint64_t>(run));
    for (double& s : cal) s = draw_score(cfg.score_model, rng);
    for (double& s : test) s = draw_score(cfg.score_model, rng);
    std::sort(cal.begin(), cal.end());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const int k = ks[i];
      const double threshold =
          k > cfg.n ? std::numeric_limits<double>::infinity() : cal[static_cast<std::size_t>(k - 1)];
      const auto covered = std::count_if(test.begin(), test.end(),
                                         [threshold](double s) { return s <= threshold; });
      ++hist[i][static_cast<std::size_t>(covered)];
    }
  }
}

}  // namespace

std::string to_string(ScoreModel model) {
  switch (model) {
    case ScoreModel::AbsCauchy: return "abs_cauchy";
    case ScoreModel::AbsNormal: return "abs_normal";
    case ScoreModel::Uniform: return "uniform";
  }
  return "?";
}

std::string to_string(SimMethod method) {
  switch (method) {
    case SimMethod::None: return "none";
    case SimMethod::SSBC: return "ssbc";
    case SimMethod::DKWM: return "dkwm";
  }
  return "?";
}

ScoreModel parse_score_model(const std::string& name) {
  if (name == "abs_cauchy" || name == "cauchy") return ScoreModel::AbsCauchy;
  if (name == "abs_normal" || name == "normal") return ScoreModel::AbsNormal;
  if (name == "uniform") return ScoreModel::Uniform;
  throw std::invalid_argument("unknown score model '" + name +
                              "' (expected cauchy, normal or uniform)");
}

SimMethod parse_sim_method(const std::string& name) {
  if (name == "none") return SimMethod::None;
  if (name == "ssbc") return SimMethod::SSBC;
  if (name == "dkwm") return SimMethod::DKWM;
  throw std::invalid_argument("unknown method '" + name + "' (expected none, ssbc or dkwm)");
}

void SimConfig::validate() const {
  CalibrationContext{n, alpha_target, delta}.validate();
  if (m < 1) throw std::invalid_argument("window size m must be >= 1, got " + std::to_string(m));
  if (runs < 1) throw std::invalid_argument("runs must be >= 1, got " + std::to_string(runs));
  if (methods.empty()) throw std::invalid_argument("at least one method is required");
}

RunRng::RunRng(std::uint64_t seed, std::uint64_t run_index)
    : state_(mix64(seed ^ mix64(run_index + kGolden))) {}

std::uint64_t RunRng::next() {
  state_ += kGolden;
  return mix64(state_);
}

double RunRng::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double draw_score(ScoreModel model, RunRng& rng) {
  switch (model) {
    case ScoreModel::AbsCauchy:
      return std::fabs(std::tan(std::numbers::pi * (rng.uniform() - 0.5)));
    case ScoreModel::AbsNormal: {
      const double radius = std::sqrt(-2.0 * std::log(rng.uniform()));
      return std::fabs(radius * std::cos(2.0 * std::numbers::pi * rng.uniform()));
    }
    case ScoreModel::Uniform:
      return rng.uniform();
  }
  return 0.0;
}

double split_conformal_threshold(std::span<const double> scores, double alpha) {
  if (scores.empty()) throw std::invalid_argument("split_conformal_threshold: no scores");
  const int n = static_cast<int>(scores.size());
  const int k = order_index(alpha, n);
  if (k > n) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[static_cast<std::size_t>(k - 1)];
}

std::vector<double> theory_overlay(const SimConfig& config, double method_alpha) {
  const int k = order_index(method_alpha, config.n);
  if (k == config.n + 1) {
    std::vector<double> point(static_cast<std::size_t>(config.m) + 1, 0.0);
    point.back() = 1.0;
    return point;
  }
  return betabinom_pmf_table(BetaBinomialParams{config.m, double(k), double(config.n + 1 - k)});
}

double total_variation(std::span<const std::int64_t> histogram, std::span<const double> pmf) {
  if (histogram.size() != pmf.size()) {
    throw std::invalid_argument("total_variation: histogram and pmf sizes differ");
  }
  long double total = 0.0L;
  for (const auto c : histogram) total += static_cast<long double>(c);
  if (total == 0.0L) return 0.0;
  long double acc = 0.0L;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    acc += std::fabs(static_cast<long double>(histogram[i]) / total - pmf[i]);
  }
  return static_cast<double>(acc / 2.0L);
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("SSBC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SimReport run_simulation(const SimConfig& config, unsigned workers) {
  config.validate();
  SimReport report;
  report.config = config;
  report.seed_echo = config.seed;

  std::vector<MethodPlan> plans;
  std::vector<int> ks;
  for (const SimMethod method : config.methods) {
    MethodPlan plan = plan_method(config, method);
    if (!plan.result.skipped) ks.push_back(plan.k);
    plans.push_back(std::move(plan));
  }

  if (workers == 0) workers = default_worker_count();
  const auto worker_count =
      static_cast<std::int64_t>(std::min<std::int64_t>(workers, config.runs));
  std::vector<Histograms> partial(
      static_cast<std::size_t>(worker_count),
      Histograms(ks.size(), std::vector<std::int64_t>(static_cast<std::size_t>(config.m) + 1, 0)));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (std::int64_t w = 0; w < worker_count; ++w) {
      const std::int64_t first = config.runs * w / worker_count;
      const std::int64_t last = config.runs * (w + 1) / worker_count;
      pool.emplace_back([&, w, first, last] {
        simulate_block(config, ks, first, last, partial[static_cast<std::size_t>(w)]);
      });
    }
  }

  std::size_t active = 0;
  for (MethodPlan& plan : plans) {
    MethodResult& res = plan.result;
    if (res.skipped) {
      report.methods.push_back(std::move(res));
      continue;
    }
    for (const Histograms& h : partial) {
      for (std::size_t c = 0; c < h[active].size(); ++c) res.coverage_histogram[c] += h[active][c];
    }
    ++active;
    for (int c = 0; c < plan.x_star; ++c) {
      res.violations += res.coverage_histogram[static_cast<std::size_t>(c)];
    }
    res.empirical_violation_rate =
        static_cast<double>(res.violations) / static_cast<double>(config.runs);
    res.total_variation = total_variation(res.coverage_histogram, res.theory_pmf);
    report.methods.push_back(std::move(res));
  }
  report.runs_completed = config.runs;
  return report;
}

}  // namespace ssbc
