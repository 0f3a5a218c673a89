#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "ssbc/mc.hpp"
#include "ssbc/report_io.hpp"

using namespace ssbc;

namespace {

const MethodResult& find(const SimReport& rep, SimMethod method) {
  for (const MethodResult& r : rep.methods) {
    if (r.method == method) return r;
  }
  throw std::logic_error("method missing from report");
}

}  // namespace

TEST_SUITE("mc") {

TEST_CASE("split_conformal_threshold examples") {
  const std::vector<double> four{4, 2, 3, 1};
  CHECK(split_conformal_threshold(four, 0.5) == 3.0);
  const std::vector<double> one{5};
  CHECK(split_conformal_threshold(one, 0.4) == std::numeric_limits<double>::infinity());
  std::vector<double> fifty;
  for (int i = 50; i >= 1; --i) fifty.push_back(i * 1.5);
  CHECK(split_conformal_threshold(fifty, 2.0 / 51.0) == 49 * 1.5);
  CHECK_THROWS_AS(split_conformal_threshold(std::vector<double>{}, 0.1), std::invalid_argument);
}

TEST_CASE("theory_overlay shapes") {
  SimConfig cfg;
  const auto none = theory_overlay(cfg, 0.1);
  const auto ssbc = theory_overlay(cfg, 2.0 / 51.0);
  REQUIRE(none.size() == 101);
  for (int c = 0; c <= 100; c += 7) {
    CHECK(std::fabs(none[std::size_t(c)] - double(oracle::betabinom_pmf_product(c, 100, 46, 5))) < 1e-13);
    CHECK(std::fabs(ssbc[std::size_t(c)] - double(oracle::betabinom_pmf_product(c, 100, 49, 2))) < 1e-13);
  }
  cfg.m = 1;
  const auto two = theory_overlay(cfg, 0.1);
  REQUIRE(two.size() == 2);
  CHECK(std::fabs(two[1] - 46.0 / 51.0) < 1e-14);
  CHECK(std::fabs(two[0] + two[1] - 1.0) < 1e-14);
}

TEST_CASE("total_variation") {
  const std::vector<std::int64_t> h{1, 1, 2};
  const std::vector<double> p{0.25, 0.25, 0.5};
  CHECK(total_variation(h, p) == doctest::Approx(0.0));
  const std::vector<double> q{0.5, 0.5, 0.0};
  CHECK(total_variation(h, q) == doctest::Approx(0.5));
}

TEST_CASE("run generators are independent of each other and repeatable") {
  RunRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  RunRng e(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double u = e.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("score draws have the requested support") {
  RunRng rng(5, 0);
  for (int i = 0; i < 10000; ++i) {
    CHECK(draw_score(ScoreModel::AbsCauchy, rng) >= 0.0);
    CHECK(draw_score(ScoreModel::AbsNormal, rng) >= 0.0);
    const double u = draw_score(ScoreModel::Uniform, rng);
    CHECK((u > 0.0 && u < 1.0));
  }
}

TEST_CASE("name parsing") {
  CHECK(parse_score_model("cauchy") == ScoreModel::AbsCauchy);
  CHECK(parse_score_model("abs_normal") == ScoreModel::AbsNormal);
  CHECK(parse_sim_method("dkwm") == SimMethod::DKWM);
  CHECK(to_string(SimMethod::None) == "none");
  CHECK_THROWS_AS(parse_score_model("student"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sim_method("bonferroni"), std::invalid_argument);
}

TEST_CASE("report does not depend on the worker count") {
  SimConfig cfg;
  cfg.runs = 20000;
  cfg.seed = 1234;
  cfg.methods = {SimMethod::None, SimMethod::SSBC, SimMethod::DKWM};
  const std::string one = dump_json(to_json(run_simulation(cfg, 1)));
  CHECK(one == dump_json(to_json(run_simulation(cfg, 3))));
  CHECK(one == dump_json(to_json(run_simulation(cfg, 16))));
  cfg.seed = 1235;
  CHECK(one != dump_json(to_json(run_simulation(cfg, 4))));
}

TEST_CASE("histograms sum to the run count and rates lie in [0, 1]") {
  SimConfig cfg;
  cfg.runs = 5000;
  cfg.m = 13;
  cfg.methods = {SimMethod::None, SimMethod::SSBC};
  const SimReport rep = run_simulation(cfg, 2);
  CHECK(rep.runs_completed == 5000);
  CHECK(rep.seed_echo == cfg.seed);
  for (const MethodResult& r : rep.methods) {
    std::int64_t sum = 0;
    for (auto c : r.coverage_histogram) sum += c;
    CHECK(sum == 5000);
    CHECK(r.empirical_violation_rate >= 0.0);
    CHECK(r.empirical_violation_rate <= 1.0);
  }
}

TEST_CASE("infeasible methods are skipped with a note") {
  SimConfig cfg;
  cfg.alpha_target = 0.05;
  cfg.runs = 100;
  cfg.methods = {SimMethod::DKWM, SimMethod::None};
  const SimReport rep = run_simulation(cfg, 1);
  const MethodResult& dkwm = find(rep, SimMethod::DKWM);
  CHECK(dkwm.skipped);
  CHECK_FALSE(dkwm.notes.empty());
  CHECK_FALSE(find(rep, SimMethod::None).skipped);
}

TEST_CASE("violation rates at 1e5 runs") {
  SimConfig cfg;
  cfg.runs = 100000;
  const SimReport rep = run_simulation(cfg);
  const MethodResult& none = find(rep, SimMethod::None);
  const MethodResult& ssbc = find(rep, SimMethod::SSBC);
  CHECK(ssbc.u_star == 2);
  CHECK(std::fabs(ssbc.empirical_violation_rate - ssbc.theory_violation_rate) < 0.01);
  CHECK(std::fabs(none.empirical_violation_rate - none.theory_violation_rate) < 0.01);
  CHECK(ssbc.total_variation < 0.02);

  // three standard errors around the exact violation probability
  const double p = none.theory_violation_rate;
  const double se = std::sqrt(p * (1 - p) / cfg.runs);
  CHECK(std::fabs(none.empirical_violation_rate - p) < 3 * se);
}

TEST_CASE("violation rate does not depend on the score distribution") {
  SimConfig cfg;
  cfg.runs = 100000;
  cfg.methods = {SimMethod::None};
  const double a = find(run_simulation(cfg), SimMethod::None).empirical_violation_rate;
  cfg.score_model = ScoreModel::Uniform;
  cfg.seed = 777;
  const double b = find(run_simulation(cfg), SimMethod::None).empirical_violation_rate;
  const double pooled = (a + b) / 2;
  const double se = std::sqrt(pooled * (1 - pooled) * 2.0 / cfg.runs);
  CHECK(std::fabs(a - b) / se < 2.576);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.runs = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.methods.clear();
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.delta = 1.5;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
}

}  // TEST_SUITE
