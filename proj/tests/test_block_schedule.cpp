#include <cmath>
#include <vector>

#include "doctest.h"

#include "lacunary/block_schedule.hpp"
#include "lacunary/error.hpp"

using namespace lacunary;

namespace {

// Root by scanning: independent of the Newton iteration.
std::uint64_t scan_root(std::uint64_t n, int power) {
  std::uint64_t r = 0;
  while (true) {
    std::uint64_t p = 1;
    for (int i = 0; i < power; ++i) p *= (r + 1);
    if (p > n) return r;
    ++r;
  }
}

}  // namespace

TEST_CASE("integer roots") {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    REQUIRE(isqrt(n) == scan_root(n, 2));
    REQUIRE(iroot4(n) == scan_root(n, 4));
  }
  for (std::uint64_t r : {65535ull, 1000000ull, 4294967295ull}) {
    CHECK(isqrt(r * r) == r);
    CHECK(isqrt(r * r - 1) == r - 1);
  }
  CHECK(isqrt(~0ull) == 4294967295ull);
  CHECK(iroot4(16) == 2);
  CHECK(iroot4(15) == 1);
}

TEST_CASE("schedule sums") {
  CHECK(m_tilde(3) == 3);
  CHECK(m_hat(3) == 3);
  CHECK(m_total(3) == 6);
  CHECK(m_tilde(4) == 5);
  CHECK(m_hat(4) == 4);
  CHECK(m_total(4) == 9);
  CHECK(m_total(0) == 0);

  std::uint64_t tilde = 0, hat = 0;
  for (std::uint64_t k = 1; k <= 20000; ++k) {
    tilde += scan_root(k, 2);
    hat += scan_root(k, 4);
    REQUIRE(m_tilde(k) == tilde);
    REQUIRE(m_hat(k) == hat);
  }
}

TEST_CASE("block index p(n)") {
  CHECK(p_of_n(0) == 0);
  CHECK(p_of_n(1) == 0);
  CHECK(p_of_n(2) == 1);
  CHECK(p_of_n(5) == 2);
  CHECK(p_of_n(6) == 3);
  const auto p = p_of_n(1'000'000);
  CHECK(m_total(p) <= 1'000'000);
  CHECK(m_total(p + 1) > 1'000'000);
}

TEST_CASE("schedule invariants up to 1e5") {
  const auto v = verify_schedule(100'000);
  CHECK(v.tiling);
  CHECK(v.sandwich);
  CHECK(v.monotone);
  CHECK(v.closed_form);
  CHECK(v.checked == 100'000);
}

TEST_CASE("ranges partition 1..n") {
  for (std::uint64_t n : {1ull, 2ull, 6ull, 37ull, 1000ull, 12345ull}) {
    const auto p = p_of_n(n);
    const auto s = BlockSchedule::build(p);
    std::vector<int> hits(n + 1, 0);
    for (std::uint64_t k = 0; k < p; ++k) {
      for (auto r : {s.long_ranges[k], s.short_ranges[k]}) {
        for (auto j = r.first; j <= r.last; ++j) ++hits[j];
      }
    }
    for (auto j = s.m[p] + 1; j <= n; ++j) ++hits[j];
    for (std::uint64_t j = 1; j <= n; ++j) REQUIRE(hits[j] == 1);
  }
}

TEST_CASE("first blocks") {
  const auto s = BlockSchedule::build(4);
  CHECK(s.long_ranges[0].first == 1);
  CHECK(s.long_ranges[0].last == 1);
  CHECK(s.short_ranges[0].first == 2);
  CHECK(s.long_ranges[2].first == 5);
  CHECK(s.short_ranges[2].last == 6);
  CHECK(s.long_ranges[3].size() == 2);
  CHECK(s.short_ranges[3].size() == 1);
}

TEST_CASE("block sums") {
  // Phases chosen so that f evaluates to readable constants.
  const ShapeFunction cos = TrigPolynomial::cosine();
  const std::vector<double> phases = {0.0, 0.5, 0.0, 0.25, 0.5, 0.0};
  const auto b = block_sums(phases, cos, 6);
  REQUIRE(b.blocks == 3);
  CHECK(b.long_sums[0] == doctest::Approx(1.0));
  CHECK(b.short_sums[0] == doctest::Approx(-1.0));
  CHECK(b.long_sums[1] == doctest::Approx(1.0));
  CHECK(std::abs(b.short_sums[1]) < 1e-15);
  CHECK(b.long_sums[2] == doctest::Approx(-1.0));
  CHECK(b.short_sums[2] == doctest::Approx(1.0));
  CHECK(b.remainder == 0.0);

  const auto z = block_sums(phases, ShapeFunction(TrigPolynomial()), 6);
  for (double v : z.long_sums) CHECK(v == 0.0);
  CHECK_THROWS_AS(block_sums(phases, cos, 7), InvalidInput);
}

TEST_CASE("block sums add up to the direct partial sum") {
  const ShapeFunction cos = TrigPolynomial::cosine();
  const auto path = walk_phases(GapDistribution::uniform(0.0, 1.0), 1.0, 10'000, 12);
  const auto b = block_sums(path.phases, cos, 10'000);
  double direct = 0.0;
  for (double t : path.phases) direct += evaluate(cos, t);
  CHECK(std::abs(b.total() - direct) < 1e-9);
}

TEST_CASE("schedule asymptotics") {
  const auto a = schedule_asymptotics(1'000'000);
  CHECK(a.tilde_ratio >= 0.999);
  CHECK(a.tilde_ratio <= 1.001);
  CHECK(a.remainder_scaled <= 3.0);
  // Exact integer oracle for the short-block ratio.
  std::uint64_t hat = 0;
  for (std::uint64_t k = 1; k <= 1'000'000; ++k) hat += scan_root(k, 4);
  CHECK(a.hat_ratio == doctest::Approx(static_cast<double>(hat) / (0.8 * std::pow(1e6, 1.25))).epsilon(1e-15));
  CHECK_THROWS_AS(schedule_asymptotics(5), InvalidInput);
}

TEST_CASE("block variance ratio errors") {
  const Executor exec(1);
  const auto u = GapDistribution::uniform(0.0, 1.0);
  CHECK_THROWS_AS(block_variance_ratio(ShapeFunction(TrigPolynomial()), u, 0.5, 10, 200, 1, exec), InvalidInput);
  CHECK_THROWS_AS(block_variance_ratio(TrigPolynomial::cosine(), u, 0.5, 10, 50, 1, exec), InvalidInput);
}

TEST_CASE("block variance ratio at x = 1 is near one") {
  // Phases are exactly uniform and independent: Var(T_k) = L/2 = A L.
  const auto r = block_variance_ratio(TrigPolynomial::cosine(), GapDistribution::uniform(0.0, 1.0), 1.0, 50, 4000, 9,
                                      Executor(2));
  CHECK(r.a_x == doctest::Approx(0.5));
  CHECK(r.ratio_long == doctest::Approx(1.0).epsilon(0.03));
  CHECK(r.ratio_short == doctest::Approx(1.0).epsilon(0.03));
}
