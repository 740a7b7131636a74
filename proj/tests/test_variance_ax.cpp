#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "lacunary/error.hpp"
#include "lacunary/variance_ax.hpp"

using namespace lacunary;

namespace {

constexpr double kPi = std::numbers::pi;
const ShapeFunction kCos = TrigPolynomial::cosine();
const auto kUniform = GapDistribution::uniform(0.0, 1.0);

struct Estimate {
  double mean;
  double se;
};

// Independent brute force: std engine, plain double sums, K terms.
Estimate brute_force_ax(double x, std::size_t k_max, std::size_t reps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const double u = unit(rng);
    double s = 0.0, acc = 0.0;
    for (std::size_t k = 0; k < k_max; ++k) {
      s += unit(rng);
      acc += std::cos(2.0 * kPi * (u + s * x));
    }
    const double v = std::cos(2.0 * kPi * u) * acc;
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1.0);
  return {0.5 + 2.0 * mean, 2.0 * std::sqrt(var / n)};
}

const double kHalfOracle = 0.5 * (kPi * kPi - 4.0) / (kPi * kPi + 4.0);

}  // namespace

TEST_CASE("closed form values") {
  CHECK(ax_closed_form(kCos, kUniform, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ax_closed_form(ShapeFunction(TrigPolynomial()), kUniform, 0.5) == 0.0);
  CHECK(ax_closed_form(kCos, kUniform, 0.5) == doctest::Approx(kHalfOracle).epsilon(1e-12));
  CHECK(ax_closed_form(kCos, kUniform, 0.5) == doctest::Approx(0.2116).epsilon(1e-4));
  const std::vector<double> v = {0.0, 1.0, 0.0};
  CHECK_THROWS_AS(ax_closed_form(ShapeFunction(mean_zero_project(v)), kUniform, 0.5), UnsupportedRepresentation);
}

TEST_CASE("closed form agrees with an independent simulation") {
  const auto oracle = brute_force_ax(0.5, 60, 1'000'000, 99);
  CHECK(std::abs(oracle.mean - ax_closed_form(kCos, kUniform, 0.5)) <= 3.0 * oracle.se);
}

TEST_CASE("series estimates") {
  const auto one = ax_series(kCos, kUniform, 1.0, 60, 4096);
  CHECK(one.value == doctest::Approx(0.5).epsilon(1e-8));
  REQUIRE(one.tail_bound);
  CHECK(*one.tail_bound == 0.0);

  const auto half = ax_series(kCos, kUniform, 0.5, 60, 4096);
  CHECK(std::abs(half.value - ax_closed_form(kCos, kUniform, 0.5)) <= 1e-4);
  REQUIRE(half.tail_bound);
  REQUIRE(half.fit);
  CHECK(half.terms.size() == 60);

  const auto k1 = ax_series(kCos, kUniform, 0.5, 1, 4096);
  REQUIRE(k1.tail_bound);
  CHECK(std::abs(k1.value - half.value) <= *k1.tail_bound);

  // Terms sit under the fitted envelope.
  const double norm = l2_norm_sq(kCos);
  for (std::size_t k = 0; k < half.fit->points.size(); ++k) {
    const auto n = half.fit->points[k].n;
    if (n > half.terms.size()) break;
    CHECK(std::abs(half.terms[n - 1]) <= norm * half.fit->envelope_c * std::pow(half.fit->w, n) * (1 + 1e-9));
  }
}

TEST_CASE("series terms equal the characteristic-function terms") {
  // E f(U) f(U + S_k x) = 0.5 Re phi(2 pi x)^k for f = cos.
  const auto d = GapDistribution::triangular(0.0, 0.3, 1.0);
  const auto s = ax_series(kCos, d, 0.7, 20, 4096);
  for (std::size_t k = 1; k <= 20; ++k) {
    const double exact = 0.5 * std::pow(d.char_fn(2.0 * kPi * 0.7), static_cast<double>(k)).real();
    CHECK(s.terms[k - 1] == doctest::Approx(exact).epsilon(1e-6).scale(1e-3));
  }
}

TEST_CASE("monte carlo estimates") {
  const Executor exec(2);
  const auto zero = ax_monte_carlo(ShapeFunction(TrigPolynomial()), kUniform, 0.5, 60, 1000, 1, exec);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.std_err == 0.0);

  const auto half = ax_monte_carlo(kCos, kUniform, 0.5, 60, 1'000'000, 5, exec);
  CHECK(std::abs(half.estimate - kHalfOracle) <= 3.0 * half.std_err);
  const auto one = ax_monte_carlo(kCos, kUniform, 1.0, 60, 1'000'000, 6, exec);
  CHECK(std::abs(one.estimate - 0.5) <= 3.0 * one.std_err);

  CHECK_THROWS_AS(ax_monte_carlo(kCos, kUniform, 0.5, 60, 999, 5, exec), InvalidInput);
}

TEST_CASE("monte carlo is independent of the worker count") {
  const auto a = ax_monte_carlo(kCos, kUniform, 0.5, 20, 5000, 3, Executor(1));
  const auto b = ax_monte_carlo(kCos, kUniform, 0.5, 20, 5000, 3, Executor(4));
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_err == b.std_err);
}

TEST_CASE("three-way agreement over several cases") {
  const Executor exec(2);
  struct Case {
    ShapeFunction f;
    GapDistribution d;
    double x;
  };
  const std::vector<Case> cases = {
      {kCos, kUniform, 0.5},
      {TrigPolynomial({1.0, 0.5}, {0.0, -0.3}), GapDistribution::triangular(0.0, 0.25, 0.5), 1.0},
      {TrigPolynomial({0.0, 0.0, 1.0}, {}), GapDistribution::raised_cosine(0.2, 0.9), 1.37},
      {TrigPolynomial({0.7}, {0.2}), GapDistribution::uniform(0.5, 1.5), -1.3},
  };
  for (const auto& c : cases) {
    VarianceOptions opt;
    opt.reps = 200'000;
    opt.seed = 11;
    const auto r = variance_report(c.f, c.d, c.x, opt, exec);
    REQUIRE(r.closed_form);
    REQUIRE(r.series_tail_bound);
    CHECK(std::abs(*r.closed_form - r.series_truncated) <= *r.series_tail_bound + 1e-4);
    CHECK(std::abs(*r.closed_form - r.monte_carlo) <= 4.0 * r.monte_carlo_std_err);
    CHECK(*r.closed_form >= 0.0);
    CHECK(r.series_truncated >= -(*r.series_tail_bound + 1e-4));
  }
}

TEST_CASE("scaling multiplies every estimate by c squared") {
  const Executor exec(1);
  const ShapeFunction f = TrigPolynomial({1.0, 0.5}, {});
  const auto g = scaled(f, 3.0);
  const auto d = GapDistribution::triangular(0.0, 0.2, 1.0);
  CHECK(ax_closed_form(g, d, 0.4) == doctest::Approx(9.0 * ax_closed_form(f, d, 0.4)).epsilon(1e-13));
  CHECK(ax_series(g, d, 0.4, 30, 4096).value == doctest::Approx(9.0 * ax_series(f, d, 0.4, 30, 4096).value).epsilon(1e-12));
  const auto mf = ax_monte_carlo(f, d, 0.4, 30, 20000, 4, exec);
  const auto mg = ax_monte_carlo(g, d, 0.4, 30, 20000, 4, exec);
  CHECK(std::abs(mg.estimate - 9.0 * mf.estimate) <= mg.std_err);
}

TEST_CASE("sampled functions use series and simulation") {
  const std::vector<double> v = {0.0, 1.0, 0.5, -0.5, -1.0};
  const ShapeFunction f = mean_zero_project(v);
  VarianceOptions opt;
  opt.reps = 200'000;
  opt.seed = 3;
  const auto r = variance_report(f, GapDistribution::uniform(0.0, 0.8), 0.9, opt, Executor(2));
  CHECK_FALSE(r.closed_form);
  CHECK(std::abs(r.series_truncated - r.monte_carlo) <= 4.0 * r.monte_carlo_std_err + 1e-4);

  // A sampled cosine tracks the trig closed form.
  const auto sampled_cos = sample_function(kCos, 4096);
  CHECK(ax_series(sampled_cos, kUniform, 0.5, 60, 4096).value == doctest::Approx(kHalfOracle).epsilon(1e-3));
}

TEST_CASE("default truncation meets its tolerance") {
  const std::size_t k = default_truncation(kUniform, 0.5, 4096);
  const auto s = ax_series(kCos, kUniform, 0.5, k, 4096);
  REQUIRE(s.tail_bound);
  CHECK(*s.tail_bound < 1e-6 * 0.5);
  CHECK(limiting_variance(kCos, kUniform, 0.5) == doctest::Approx(kHalfOracle));
}

TEST_CASE("invalid inputs") {
  const Executor exec(1);
  CHECK_THROWS_AS(ax_closed_form(kCos, kUniform, 0.0), InvalidInput);
  CHECK_THROWS_AS(ax_series(kCos, kUniform, 0.0, 10, 4096), InvalidInput);
  CHECK_THROWS_AS(ax_series(kCos, kUniform, 0.5, 10, 1000), InvalidInput);
}
