#include "lacunary/block_schedule.hpp"

#include <cmath>

#include "lacunary/error.hpp"
#include "lacunary/stats.hpp"
#include "lacunary/variance_ax.hpp"

namespace lacunary {

std::uint64_t isqrt(std::uint64_t n) noexcept {
  if (n < 2) return n;
  // Integer Newton from above converges monotonically to floor(sqrt n).
  std::uint64_t x = n;
  std::uint64_t y = x / 2 + (x & 1);
  while (y < x) {
    x = y;
    y = (x + n / x) / 2;
  }
  return x;
}

std::uint64_t iroot4(std::uint64_t n) noexcept { return isqrt(isqrt(n)); }

std::uint64_t m_tilde(std::uint64_t k) noexcept {
  if (k == 0) return 0;
  const std::uint64_t s = isqrt(k);
  // Roots r < s each occur 2r + 1 times: sum r (2r + 1) for r = 1..s-1.
  const std::uint64_t full = (s - 1) * s * (2 * s - 1) / 3 + (s - 1) * s / 2;
  return full + s * (k - s * s + 1);
}

std::uint64_t m_hat(std::uint64_t k) noexcept {
  if (k == 0) return 0;
  const std::uint64_t t = iroot4(k);
  std::uint64_t sum = 0;
  for (std::uint64_t r = 1; r < t; ++r) {
    const std::uint64_t r2 = r * r;
    const std::uint64_t q2 = (r + 1) * (r + 1);
    sum += r * (q2 * q2 - r2 * r2);
  }
  return sum + t * (k - t * t * t * t + 1);
}

std::uint64_t m_total(std::uint64_t k) noexcept { return m_tilde(k) + m_hat(k); }

std::uint64_t p_of_n(std::uint64_t n) noexcept {
  // m(k) >= k, so k = n + 1 always overshoots.
  std::uint64_t lo = 0;
  std::uint64_t hi = n + 1;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (m_total(mid) <= n) lo = mid; else hi = mid;
  }
  return lo;
}

BlockSchedule BlockSchedule::build(std::uint64_t blocks) {
  BlockSchedule s;
  s.blocks = blocks;
  s.m_tilde.assign(blocks + 1, 0);
  s.m_hat.assign(blocks + 1, 0);
  s.m.assign(blocks + 1, 0);
  s.long_ranges.resize(blocks);
  s.short_ranges.resize(blocks);
  for (std::uint64_t k = 1; k <= blocks; ++k) {
    const std::uint64_t long_len = isqrt(k);
    const std::uint64_t short_len = iroot4(k);
    s.m_tilde[k] = s.m_tilde[k - 1] + long_len;
    s.m_hat[k] = s.m_hat[k - 1] + short_len;
    s.m[k] = s.m_tilde[k] + s.m_hat[k];
    const std::uint64_t start = s.m[k - 1];
    s.long_ranges[k - 1] = {start + 1, start + long_len};
    s.short_ranges[k - 1] = {start + long_len + 1, s.m[k]};
  }
  return s;
}

double BlockSums::total() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < long_sums.size(); ++k) {
    sum += long_sums[k];
    sum += short_sums[k];
  }
  return sum + remainder;
}

BlockSums block_sums(std::span<const double> phases, const ShapeFunction& f, std::uint64_t n) {
  if (phases.size() < n) {
    throw InvalidInput("phase path shorter than n");
  }
  const std::uint64_t p = p_of_n(n);
  const auto schedule = BlockSchedule::build(p);
  auto range_sum = [&](const IndexRange& r) {
    double sum = 0.0;
    for (std::uint64_t j = r.first; j <= r.last; ++j) sum += evaluate(f, phases[j - 1]);
    return sum;
  };

  BlockSums out;
  out.blocks = p;
  out.long_sums.reserve(p);
  out.short_sums.reserve(p);
  for (std::uint64_t k = 0; k < p; ++k) {
    out.long_sums.push_back(range_sum(schedule.long_ranges[k]));
    out.short_sums.push_back(range_sum(schedule.short_ranges[k]));
  }
  out.remainder = range_sum({schedule.m[p] + 1, n});
  return out;
}

BlockVarianceRatio block_variance_ratio(const ShapeFunction& f, const GapDistribution& dist, double x,
                                        std::uint64_t n, std::size_t reps, std::uint64_t seed,
                                        const Executor& exec) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  if (reps < 100) {
    throw InvalidInput("block variance ratio needs reps >= 100");
  }
  if (n == 0) {
    throw InvalidInput("block count n must be >= 1");
  }
  const double a_x = limiting_variance(f, dist, x);
  if (!(a_x > 0.0)) {
    throw InvalidInput("A_x must be positive for a variance ratio");
  }
  const auto schedule = BlockSchedule::build(n);

  struct ChunkStats {
    std::vector<RunningStats> long_stats;
    std::vector<RunningStats> short_stats;
  };
  const auto chunks = map_chunks(exec, reps, kReplicationChunk, [&](std::size_t begin, std::size_t end) {
    ChunkStats cs{std::vector<RunningStats>(n), std::vector<RunningStats>(n)};
    for (std::size_t r = begin; r < end; ++r) {
      Xoshiro256 rng(derive_seed(seed, r));
      PhaseWalker walker(x);
      for (std::uint64_t k = 0; k < n; ++k) {
        double long_sum = 0.0;
        for (std::uint64_t j = 0; j < schedule.long_ranges[k].size(); ++j) {
          long_sum += evaluate(f, walker.advance(dist.sample(rng)));
        }
        double short_sum = 0.0;
        for (std::uint64_t j = 0; j < schedule.short_ranges[k].size(); ++j) {
          short_sum += evaluate(f, walker.advance(dist.sample(rng)));
        }
        cs.long_stats[k].push(long_sum);
        cs.short_stats[k].push(short_sum);
      }
    }
    return cs;
  });

  std::vector<RunningStats> long_total(n), short_total(n);
  for (const auto& cs : chunks) {
    for (std::uint64_t k = 0; k < n; ++k) {
      long_total[k].merge(cs.long_stats[k]);
      short_total[k].merge(cs.short_stats[k]);
    }
  }
  BlockVarianceRatio out;
  out.a_x = a_x;
  for (std::uint64_t k = 0; k < n; ++k) {
    out.sum_var_long += long_total[k].variance();
    out.sum_var_short += short_total[k].variance();
  }
  out.ratio_long = out.sum_var_long / (a_x * static_cast<double>(schedule.m_tilde[n]));
  out.ratio_short = out.sum_var_short / (a_x * static_cast<double>(schedule.m_hat[n]));
  return out;
}

ScheduleAsymptotics schedule_asymptotics(std::uint64_t n) {
  if (n < 10) {
    throw InvalidInput("schedule asymptotics need n >= 10");
  }
  const double nd = static_cast<double>(n);
  ScheduleAsymptotics out;
  out.tilde_ratio = static_cast<double>(m_tilde(n)) / (2.0 / 3.0 * std::pow(nd, 1.5));
  out.hat_ratio = static_cast<double>(m_hat(n)) / (4.0 / 5.0 * std::pow(nd, 1.25));
  out.remainder_scaled = static_cast<double>(n - m_total(p_of_n(n))) / std::cbrt(nd);
  return out;
}

ScheduleVerification verify_schedule(std::uint64_t n_max) {
  ScheduleVerification v;
  const auto schedule = BlockSchedule::build(p_of_n(n_max) + 1);
  for (std::uint64_t k = 1; k <= schedule.blocks; ++k) {
    const auto& lr = schedule.long_ranges[k - 1];
    const auto& sr = schedule.short_ranges[k - 1];
    v.tiling = v.tiling && lr.first == schedule.m[k - 1] + 1 && sr.first == lr.last + 1 &&
               sr.last == schedule.m[k] && lr.size() == isqrt(k) && sr.size() == iroot4(k);
    v.monotone = v.monotone && schedule.m_tilde[k] >= schedule.m_tilde[k - 1] &&
                 schedule.m_hat[k] >= schedule.m_hat[k - 1] && schedule.m[k] > schedule.m[k - 1];
    v.closed_form = v.closed_form && m_tilde(k) == schedule.m_tilde[k] && m_hat(k) == schedule.m_hat[k];
  }
  // Every n: blocks 1..p(n) cover [1, m_{p(n)}] and the remainder covers
  // (m_{p(n)}, n], so the sandwich plus contiguous tiling partitions {1..n}.
  std::uint64_t previous_p = 0;
  std::uint64_t scan_p = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const std::uint64_t p = p_of_n(n);
    while (scan_p + 1 <= schedule.blocks && schedule.m[scan_p + 1] <= n) ++scan_p;
    v.sandwich = v.sandwich && p == scan_p && p + 1 <= schedule.blocks && schedule.m[p] <= n &&
                 n < schedule.m[p + 1];
    v.monotone = v.monotone && p >= previous_p;
    previous_p = p;
    ++v.checked;
  }
  return v;
}

}  // namespace lacunary
