#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "lacunary/error.hpp"
#include "lacunary/periodic_fn.hpp"
#include "lacunary/rng.hpp"

using namespace lacunary;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Midpoint rule at M points: exact for trig products of degree below M.
double quadrature_autocorrelation(const ShapeFunction& f, double t, std::size_t m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    sum += evaluate(f, u) * evaluate(f, u + t);
  }
  return sum / static_cast<double>(m);
}

ShapeFunction random_trig(Xoshiro256& rng) {
  const std::size_t degree = 1 + static_cast<std::size_t>(rng.uniform() * 5);
  std::vector<double> a(degree), b(degree);
  for (std::size_t j = 0; j < degree; ++j) {
    a[j] = 2.0 * rng.uniform() - 1.0;
    b[j] = 2.0 * rng.uniform() - 1.0;
  }
  return TrigPolynomial(a, b);
}

ShapeFunction random_sampled(Xoshiro256& rng) {
  std::vector<double> v(3 + static_cast<std::size_t>(rng.uniform() * 30));
  for (auto& s : v) s = 4.0 * rng.uniform() - 2.0;
  return mean_zero_project(v);
}

const ShapeFunction kCosSin = TrigPolynomial({1.0, 0.0}, {0.0, 1.0});

}  // namespace

TEST_CASE("evaluate") {
  const ShapeFunction cosine = TrigPolynomial::cosine();
  CHECK(evaluate(cosine, 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(evaluate(cosine, 7.25)) < 1e-12);
  CHECK(evaluate(cosine, -0.5) == doctest::Approx(-1.0));
  const ShapeFunction zero = TrigPolynomial();
  CHECK(evaluate(zero, 0.3) == 0.0);
  CHECK(is_zero(zero));
  CHECK_FALSE(is_zero(cosine));
}

TEST_CASE("norms") {
  CHECK(l2_norm_sq(ShapeFunction(TrigPolynomial::cosine())) == doctest::Approx(0.5));
  CHECK(l2_norm_sq(ShapeFunction(TrigPolynomial())) == 0.0);
  CHECK(l2_norm_sq(kCosSin) == doctest::Approx(1.0));
  CHECK(l2_norm_sq(ShapeFunction(TrigPolynomial::cosine(2.0, 3))) == doctest::Approx(2.0));
}

TEST_CASE("autocorrelation values") {
  const ShapeFunction cosine = TrigPolynomial::cosine();
  CHECK(autocorrelation(cosine, 0.0) == doctest::Approx(0.5));
  CHECK(autocorrelation(cosine, 0.5) == doctest::Approx(-0.5));
  CHECK(autocorrelation(kCosSin, 0.25) == doctest::Approx(-0.5));
  CHECK(quadrature_autocorrelation(kCosSin, 0.25, 1 << 16) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("trig autocorrelation matches quadrature") {
  Xoshiro256 rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_trig(rng);
    const double t = rng.uniform() * 3.0 - 1.5;
    CHECK(autocorrelation(f, t) == doctest::Approx(quadrature_autocorrelation(f, t, 256)).epsilon(1e-12));
  }
}

TEST_CASE("sampled projection") {
  const std::vector<double> flat = {3.0, 3.0, 3.0, 3.0};
  const auto z = mean_zero_project(flat);
  CHECK(z.mean_correction() == doctest::Approx(3.0));
  CHECK(is_zero(ShapeFunction(z)));
  CHECK(l2_norm_sq(z) == doctest::Approx(0.0));

  const std::vector<double> pm = {1.0, -1.0};
  const auto alt = mean_zero_project(pm);
  CHECK(alt.mean_correction() == doctest::Approx(0.0));
  CHECK(alt.values()[0] == doctest::Approx(1.0));

  const std::vector<double> saw = {0.0, 1.0, 0.0, -1.0};
  const auto tri = mean_zero_project(saw);
  CHECK(tri.mean_correction() == doctest::Approx(0.0));
  CHECK(l2_norm_sq(tri) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(tri.lipschitz_constant() == doctest::Approx(4.0));
  CHECK(evaluate(tri, 0.125) == doctest::Approx(0.5));
  CHECK(evaluate(tri, 1.125) == doctest::Approx(0.5));

  const std::vector<double> one = {2.0};
  CHECK_THROWS_AS(mean_zero_project(one), InvalidInput);
}

TEST_CASE("sampled interpolant integrates to zero") {
  Xoshiro256 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_sampled(rng);
    double integral = 0.0;
    const std::size_t m = 1 << 14;
    for (std::size_t k = 0; k < m; ++k) integral += evaluate(f, (k + 0.5) / m);
    CHECK(std::abs(integral / m) < 1e-6);
  }
}

TEST_CASE("sampled autocorrelation matches fine quadrature") {
  Xoshiro256 rng(77);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_sampled(rng);
    const double t = rng.uniform();
    CHECK(autocorrelation(f, t) == doctest::Approx(quadrature_autocorrelation(f, t, 1 << 16)).epsilon(1e-6));
  }
}

TEST_CASE("periodicity") {
  Xoshiro256 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const auto f = i % 2 ? random_trig(rng) : random_sampled(rng);
    const double t = rng.uniform() * 20.0 - 10.0;
    CHECK(std::abs(evaluate(f, t) - evaluate(f, t + 1.0)) <= 1e-12);
  }
}

TEST_CASE("autocorrelation is even and bounded by the norm") {
  Xoshiro256 rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto f = i % 2 ? random_trig(rng) : random_sampled(rng);
    const double t = rng.uniform() * 4.0 - 2.0;
    const double r = autocorrelation(f, t);
    CHECK(std::abs(r - autocorrelation(f, -t)) <= 1e-12);
    CHECK(std::abs(r) <= l2_norm_sq(f) + 1e-12);
  }
}

TEST_CASE("sampling a trig polynomial reproduces its norm and autocorrelation") {
  Xoshiro256 rng(14);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_trig(rng);
    const ShapeFunction s = sample_function(f, 1 << 14);
    CHECK(std::abs(l2_norm_sq(s) - l2_norm_sq(f)) < 1e-4);
    for (double t : {0.1, 0.37, 0.5, 0.81}) {
      CHECK(std::abs(autocorrelation(s, t) - autocorrelation(f, t)) < 1e-4);
    }
  }
}

TEST_CASE("scaling") {
  const ShapeFunction f = TrigPolynomial({0.3, -0.2}, {0.5});
  const auto g = scaled(f, -3.0);
  CHECK(l2_norm_sq(g) == doctest::Approx(9.0 * l2_norm_sq(f)));
  CHECK(evaluate(g, 0.2) == doctest::Approx(-3.0 * evaluate(f, 0.2)));
  const std::vector<double> v = {1.0, 2.0, -4.0};
  const ShapeFunction s = mean_zero_project(v);
  CHECK(evaluate(scaled(s, 2.0), 0.4) == doctest::Approx(2.0 * evaluate(s, 0.4)));
}

TEST_CASE("wrap_unit") {
  CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
  CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
  CHECK(wrap_unit(-1e-18) < 1.0);
  CHECK(wrap_unit(3.0) == 0.0);
  CHECK(std::abs(std::cos(kTwoPi * wrap_unit(7.25))) < 1e-12);
}
