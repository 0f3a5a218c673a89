#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ssbc/adjust.hpp"
#include "ssbc/feasibility.hpp"

using namespace ssbc;

namespace {

// Smallest alpha = j/m whose window tail at rung u=1 reaches 1 - delta, found by
// scanning j upward with Beta-Binomial(m; n, 1) probabilities from the product form.
double oracle_alpha_star_finite(int n, double delta, int m) {
  long double upper = 0.0L;
  for (int j = 0; j <= m; ++j) {
    upper += oracle::betabinom_pmf_product(m - j, m, n, 1);
    if (upper >= 1.0L - delta) return static_cast<double>(j) / m;
  }
  return 1.0;
}

}  // namespace

TEST_SUITE("feasibility") {

TEST_CASE("alpha_star_infinite closed form") {
  CHECK(std::fabs(alpha_star_infinite(50, 0.1) - 0.045007413978564) < 1e-12);
  CHECK(std::fabs(alpha_star_infinite(1, 0.1) - 0.9) < 1e-15);
  CHECK(alpha_star_infinite(1000000, 0.1) < 3e-6);
  CHECK_THROWS_AS(alpha_star_infinite(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(alpha_star_infinite(5, 1.0), std::invalid_argument);
}

TEST_CASE("grid_implementable") {
  const auto g = grid_implementable(50, 0.1);
  CHECK(g.implementable);
  // (50/51)^50 to 15 digits
  CHECK(std::fabs(g.delta_max - 0.371527882126962) < 1e-13);
  const auto one = grid_implementable(1, 0.6);
  CHECK_FALSE(one.implementable);
  CHECK(one.delta_max == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(grid_implementable(10000000, 0.1).delta_max - std::exp(-1.0)) < 1e-7);
}

TEST_CASE("implementable exactly when alpha_star_infinite is not below the first grid level") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> n_dist(1, 3000);
  std::uniform_real_distribution<double> unit(0.001, 0.999);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = n_dist(gen);
    const double delta = unit(gen);
    const auto g = grid_implementable(n, delta);
    if (std::fabs(delta - g.delta_max) < 1e-9) continue;
    CHECK(g.implementable == (alpha_star_infinite(n, delta) >= 1.0 / (n + 1.0)));
  }
}

TEST_CASE("alpha_star_laplace") {
  CHECK(std::fabs(alpha_star_laplace(50, 0.1, 100) - 0.053278) < 5e-7);
  // 0.75 + sqrt(0.1875 / (8 pi))
  CHECK(std::fabs(alpha_star_laplace(1, 0.25, 4) - 0.8363735373678338) < 1e-14);
  CHECK(std::fabs(alpha_star_laplace(50, 0.1, 100000000) - alpha_star_infinite(50, 0.1)) < 1e-5);
  CHECK_THROWS_AS(alpha_star_laplace(50, 0.1, 0), std::invalid_argument);
}

TEST_CASE("alpha_star_exact_finite examples") {
  const double a = alpha_star_exact_finite(50, 0.1, 100);
  CHECK(std::fabs(a - 0.0533) <= 1.0 / 100);
  CHECK(a == doctest::Approx(oracle_alpha_star_finite(50, 0.1, 100)));
  // x* = m passes iff n/(n+m) >= 1 - delta
  CHECK(alpha_star_exact_finite(10, 0.6, 5) == 0.0);  // 10/15 >= 0.4
  CHECK(alpha_star_exact_finite(10, 0.3, 5) > 0.0);   // 10/15 < 0.7
  for (int n : {1, 3, 40}) {
    for (double delta : {0.05, 0.5, 0.95}) {
      const double v = alpha_star_exact_finite(n, delta, 1);
      CHECK((v == 0.0 || v == 1.0));
    }
  }
}

TEST_CASE("alpha_star_exact_finite matches the product-form oracle") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> n_dist(1, 200);
  std::uniform_int_distribution<int> m_dist(1, 300);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = n_dist(gen);
    const int m = m_dist(gen);
    const double delta = unit(gen);
    CAPTURE(n);
    CAPTURE(m);
    CAPTURE(delta);
    CHECK(std::fabs(alpha_star_exact_finite(n, delta, m) - oracle_alpha_star_finite(n, delta, m)) < 1e-12);
  }
}

TEST_CASE("finite-window gap is bounded below by one step and vanishes as m grows") {
  // the gap can be slightly negative because the window tail is a step function
  CHECK(alpha_star_exact_finite(25, 0.25, 25) - alpha_star_infinite(25, 0.25) < 0.0);
  for (int n : {10, 50, 100}) {
    for (double delta : {0.05, 0.1, 0.25}) {
      const double a0 = alpha_star_infinite(n, delta);
      for (int m : {5, 20, 100, 500, 2000}) {
        CHECK(alpha_star_exact_finite(n, delta, m) - a0 >= -1.0 / m);
      }
      CHECK(std::fabs(alpha_star_exact_finite(n, delta, 20000) - a0) < 0.01);
    }
  }
}

TEST_CASE("window SSBC feasibility follows the exact finite threshold") {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> n_dist(1, 150);
  std::uniform_int_distribution<int> m_dist(1, 200);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = n_dist(gen);
    const int m = m_dist(gen);
    const double delta = unit(gen);
    const double alpha = unit(gen);
    const bool expect = alpha > 1.0 / (n + 1.0) && alpha >= alpha_star_exact_finite(n, delta, m);
    CAPTURE(n);
    CAPTURE(m);
    CAPTURE(alpha);
    CAPTURE(delta);
    CHECK(ssbc_adjust({n, alpha, delta}, CoverageRegime::window(m)).feasible == expect);
  }
}

TEST_CASE("feasibility_report fields") {
  const auto plain = feasibility_report(50, 0.1);
  CHECK_FALSE(plain.m.has_value());
  CHECK_FALSE(plain.alpha_star_m.has_value());
  CHECK_FALSE(plain.alpha_star_m_laplace.has_value());
  CHECK(plain.implementable);
  const auto win = feasibility_report(50, 0.1, 100);
  REQUIRE(win.alpha_star_m.has_value());
  CHECK(*win.alpha_star_m == alpha_star_exact_finite(50, 0.1, 100));
  CHECK(*win.alpha_star_m_laplace == alpha_star_laplace(50, 0.1, 100));
}

TEST_CASE("rung_table infinite-test examples") {
  const RungTable t = rung_table(50, 0.1, CoverageRegime::infinite());
  REQUIRE(t.rungs.size() == 50);
  const auto tails = oracle::binomial_upper_tails(50, 0.9L);
  for (int u = 1; u <= 50; ++u) {
    const Rung& r = t.rungs[static_cast<std::size_t>(u - 1)];
    CHECK(r.u == u);
    CHECK(r.alpha_prime == doctest::Approx(u / 51.0));
    CHECK(std::fabs(r.attainable_delta - static_cast<double>(tails[std::size_t(51 - u)])) < 1e-12);
  }
  CHECK(std::fabs(t.rungs[0].attainable_delta - 0.00515) < 5e-6);
  CHECK(std::fabs(t.rungs[1].attainable_delta - 0.0338) < 5e-5);
  CHECK(std::fabs(t.rungs[2].attainable_delta - 0.1117) < 5e-5);
  // top rung is Beta(1, n): Pr(C < 1 - alpha) = 1 - alpha^n
  CHECK(std::fabs(t.rungs.back().attainable_delta - (1.0 - std::pow(0.1, 50))) < 1e-14);
}

TEST_CASE("rung_table window example") {
  const RungTable t = rung_table(50, 0.1, CoverageRegime::window(100));
  const Rung* first = nullptr;
  for (auto it = t.rungs.rbegin(); it != t.rungs.rend(); ++it) {
    if (it->alpha_prime < 0.1 && it->attainable_delta <= 0.1) {
      first = &*it;
      break;
    }
  }
  REQUIRE(first != nullptr);
  CHECK(first->u == 2);
  CHECK(std::fabs(first->attainable_delta - 0.047) < 0.0005);
}

TEST_CASE("attainable delta is nondecreasing in the rung") {
  for (const CoverageRegime reg : {CoverageRegime::infinite(), CoverageRegime::window(30)}) {
    for (int n : {3, 40, 200}) {
      for (double alpha : {0.02, 0.1, 0.6}) {
        const RungTable t = rung_table(n, alpha, reg);
        for (std::size_t i = 1; i < t.rungs.size(); ++i) {
          CHECK(t.rungs[i].attainable_delta >= t.rungs[i - 1].attainable_delta - 1e-13);
        }
      }
    }
  }
}

TEST_CASE("slope fit bookkeeping") {
  const std::vector<int> windows{100, 400, 1600};
  const SlopeFit fit = fit_finite_window_slope(50, 0.1, windows);
  REQUIRE(fit.gaps.size() == 3);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = 1.0 / std::sqrt(double(windows[i]));
    CHECK(fit.gaps[i] == alpha_star_exact_finite(50, 0.1, windows[i]) - alpha_star_infinite(50, 0.1));
    sxy += x * fit.gaps[i];
    sxx += x * x;
  }
  CHECK(fit.slope == doctest::Approx(sxy / sxx));
  const double a0 = alpha_star_infinite(50, 0.1);
  CHECK(fit.expected_slope == doctest::Approx(std::sqrt(a0 * (1 - a0) / (2 * 3.141592653589793))));
  CHECK(fit.ratio == doctest::Approx(fit.slope / fit.expected_slope));
  CHECK_THROWS_AS(fit_finite_window_slope(50, 0.1, std::span<const int>{}), std::invalid_argument);
}

}  // TEST_SUITE
