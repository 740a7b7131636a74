#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lacunary/gap_walk.hpp"
#include "lacunary/parallel.hpp"
#include "lacunary/periodic_fn.hpp"

namespace lacunary {

/// floor(sqrt(n)) and floor(n^{1/4}) in exact integer arithmetic.
std::uint64_t isqrt(std::uint64_t n) noexcept;
std::uint64_t iroot4(std::uint64_t n) noexcept;

/// sum_{j<=k} floor(j^{1/2}), sum_{j<=k} floor(j^{1/4}) and their sum. All
/// are 0 at k = 0 and are evaluated in O(sqrt k) by grouping equal roots.
std::uint64_t m_tilde(std::uint64_t k) noexcept;
std::uint64_t m_hat(std::uint64_t k) noexcept;
std::uint64_t m_total(std::uint64_t k) noexcept;

/// The unique p with m(p) <= n < m(p + 1). Returns 0 when n < m(1) = 2.
std::uint64_t p_of_n(std::uint64_t n) noexcept;

/// One-based closed index range [first, last]; empty when last < first.
struct IndexRange {
  std::uint64_t first = 1;
  std::uint64_t last = 0;

  std::uint64_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
};

/// Block k covers (m_{k-1}, m_k]: a long block of floor(sqrt k) indices
/// followed by a short block of floor(k^{1/4}) indices.
struct BlockSchedule {
  std::uint64_t blocks = 0;
  std::vector<std::uint64_t> m_tilde;  ///< index 0..blocks
  std::vector<std::uint64_t> m_hat;
  std::vector<std::uint64_t> m;
  std::vector<IndexRange> long_ranges;   ///< index k-1 for block k
  std::vector<IndexRange> short_ranges;

  static BlockSchedule build(std::uint64_t blocks);
};

struct BlockSums {
  std::uint64_t blocks = 0;           ///< p(n)
  std::vector<double> long_sums;      ///< T_k
  std::vector<double> short_sums;     ///< T*_k
  double remainder = 0.0;             ///< sum over (m_{p(n)}, n]

  /// T_1 + T*_1 + T_2 + ... + remainder.
  double total() const noexcept;
};

/// Long/short block sums of f over phases t_1..t_n (phases[j-1] = t_j).
/// Throws InvalidInput when fewer than n phases are given.
BlockSums block_sums(std::span<const double> phases, const ShapeFunction& f, std::uint64_t n);

struct BlockVarianceRatio {
  double ratio_long = 0.0;   ///< sum_k Var(T_k) / (A_x m~_n)
  double ratio_short = 0.0;  ///< sum_k Var(T*_k) / (A_x m^_n)
  double sum_var_long = 0.0;
  double sum_var_short = 0.0;
  double a_x = 0.0;
};

/// Replicates n complete blocks (m_n phases) `reps` times and compares the
/// summed block variances with A_x times the block lengths. Throws
/// InvalidInput when A_x <= 0 or reps < 100.
BlockVarianceRatio block_variance_ratio(const ShapeFunction& f, const GapDistribution& dist, double x,
                                        std::uint64_t n, std::size_t reps, std::uint64_t seed,
                                        const Executor& exec);

struct ScheduleAsymptotics {
  double tilde_ratio = 0.0;      ///< m~_n / ((2/3) n^{3/2})
  double hat_ratio = 0.0;        ///< m^_n / ((4/5) n^{5/4})
  double remainder_scaled = 0.0; ///< (n - m_{p(n)}) / n^{1/3}
};

ScheduleAsymptotics schedule_asymptotics(std::uint64_t n);

/// Exhaustive check of the schedule invariants for every n <= n_max.
struct ScheduleVerification {
  bool tiling = true;        ///< blocks tile (m_{k-1}, m_k] with no gap or overlap
  bool sandwich = true;      ///< m(p(n)) <= n < m(p(n) + 1)
  bool monotone = true;      ///< m~, m^, m and p(n) nondecreasing
  bool closed_form = true;   ///< grouped-root sums equal the running sums
  std::uint64_t checked = 0;

  bool ok() const noexcept { return tiling && sandwich && monotone && closed_form; }
};

ScheduleVerification verify_schedule(std::uint64_t n_max);

}  // namespace lacunary
