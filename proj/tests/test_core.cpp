#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "lacunary/circular.hpp"
#include "lacunary/parallel.hpp"
#include "lacunary/rng.hpp"
#include "lacunary/stats.hpp"

using namespace lacunary;

TEST_CASE("derived seeds are pure functions of master and index") {
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(7, 4));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 10000; ++i) seeds.push_back(derive_seed(42, i));
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("xoshiro stream is reproducible and uniform") {
  Xoshiro256 a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  Xoshiro256 rng(99);
  std::vector<std::size_t> counts(32, 0);
  for (int i = 0; i < 320000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++counts[static_cast<std::size_t>(u * 32)];
  }
  CHECK(chi_square_uniform_p_value(counts) > 1e-3);
}

TEST_CASE("normal deviates have unit variance and pass KS") {
  Xoshiro256 rng(5);
  std::vector<double> z(20000);
  RunningStats s;
  for (auto& v : z) {
    v = rng.normal();
    s.push(v);
  }
  CHECK(std::abs(s.mean()) < 4.0 / std::sqrt(20000.0));
  CHECK(std::abs(s.variance() - 1.0) < 0.05);
  CHECK(ks_test_standard_normal(z).p_value > 1e-3);
}

TEST_CASE("running stats merge equals a single pass") {
  Xoshiro256 rng(1);
  std::vector<double> xs(1000);
  for (auto& v : xs) v = rng.uniform() * 10.0 - 3.0;
  RunningStats whole, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    whole.push(xs[i]);
    (i < 377 ? left : right).push(xs[i]);
  }
  left.merge(right);
  CHECK(left.count() == whole.count());
  CHECK(left.mean() == doctest::Approx(whole.mean()).epsilon(1e-12));
  CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));

  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / 1000.0;
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  CHECK(whole.variance() == doctest::Approx(ss / 999.0).epsilon(1e-12));
}

TEST_CASE("empty and single-value stats") {
  RunningStats s;
  CHECK(s.variance() == 0.0);
  s.push(3.0);
  CHECK(s.mean() == 3.0);
  CHECK(s.variance() == 0.0);
}

TEST_CASE("kolmogorov survival at reference points") {
  // Tabulated P(K > lambda).
  CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.01));
  CHECK(kolmogorov_survival(1.63) == doctest::Approx(0.0098).epsilon(0.02));
  CHECK(kolmogorov_survival(0.0) == doctest::Approx(1.0));
  CHECK(kolmogorov_survival(10.0) < 1e-50);
}

TEST_CASE("KS p-values are uniform under the null") {
  // 100 batches of standard normals: the p-values must look uniform.
  Xoshiro256 rng(2024);
  std::vector<std::size_t> bins(10, 0);
  for (int batch = 0; batch < 100; ++batch) {
    std::vector<double> z(2000);
    for (auto& v : z) v = rng.normal();
    const double p = ks_test_standard_normal(z).p_value;
    ++bins[std::min<std::size_t>(9, static_cast<std::size_t>(p * 10))];
  }
  CHECK(chi_square_uniform_p_value(bins) > 1e-3);
}

TEST_CASE("KS rejects a shifted sample") {
  Xoshiro256 rng(3);
  std::vector<double> z(2000);
  for (auto& v : z) v = rng.normal() + 0.3;
  CHECK(ks_test_standard_normal(z).p_value < 1e-6);
}

TEST_CASE("chi-square flags a lopsided table") {
  const std::vector<std::size_t> fair = {100, 100, 100, 100};
  const std::vector<std::size_t> skewed = {400, 10, 10, 10};
  CHECK(chi_square_uniform_p_value(fair) == doctest::Approx(1.0));
  CHECK(chi_square_uniform_p_value(skewed) < 1e-10);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("normal cdf") {
  CHECK(standard_normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(standard_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
}

TEST_CASE("executor visits every index once for any worker count") {
  for (std::size_t workers : {1u, 2u, 4u, 7u}) {
    Executor exec(workers);
    std::vector<std::atomic<int>> hits(1000);
    exec.for_each_index(hits.size(), [&](std::size_t i) { ++hits[i]; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
  }
}

TEST_CASE("executor rethrows the lowest failing index") {
  Executor exec(4);
  try {
    exec.for_each_index(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

TEST_CASE("chunked reductions do not depend on the worker count") {
  auto sum_with = [](std::size_t workers) {
    Executor exec(workers);
    const auto parts = map_chunks(exec, 10000, kReplicationChunk, [](std::size_t b, std::size_t e) {
      RunningStats s;
      for (std::size_t r = b; r < e; ++r) {
        Xoshiro256 rng(derive_seed(11, r));
        s.push(rng.normal());
      }
      return s;
    });
    RunningStats total;
    for (const auto& p : parts) total.merge(p);
    return std::make_pair(total.mean(), total.variance());
  };
  const auto one = sum_with(1);
  CHECK(sum_with(3) == one);
  CHECK(sum_with(8) == one);
}

TEST_CASE("circular transform round trip and convolution") {
  CHECK(is_power_of_two(256));
  CHECK_FALSE(is_power_of_two(255));
  CHECK_FALSE(is_power_of_two(0));

  const std::size_t n = 64;
  CircularTransform t(n);
  Xoshiro256 rng(8);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform();
    b[i] = rng.uniform();
  }
  const auto back = t.inverse(t.forward(a));
  for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(a[i]).epsilon(1e-12));

  auto fa = t.forward(a);
  const auto fb = t.forward(b);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  const auto conv = t.inverse(fa);
  for (std::size_t i = 0; i < n; ++i) {
    double direct = 0.0;
    for (std::size_t j = 0; j < n; ++j) direct += a[j] * b[(i + n - j) % n];
    CHECK(conv[i] == doctest::Approx(direct).epsilon(1e-10));
  }
}
