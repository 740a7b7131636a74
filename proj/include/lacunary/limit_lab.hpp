#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lacunary/gap_walk.hpp"
#include "lacunary/parallel.hpp"
#include "lacunary/periodic_fn.hpp"

namespace lacunary {

enum class Verdict { Pass, Fail, Diagnostic };

const char* to_string(Verdict v) noexcept;

struct TestReport {
  std::string name;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::optional<std::pair<double, double>> band;
  std::size_t sample_size = 0;
  Verdict verdict = Verdict::Diagnostic;
  /// Supporting numbers, in insertion order.
  std::vector<std::pair<std::string, double>> details;

  double detail(const std::string& key) const;
};

/// Partial sums of f(t_k) recorded on a geometric checkpoint grid.
struct TrajectoryCheckpoints {
  std::uint64_t seed = 0;
  double x = 0.0;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> partial_sums;     ///< S_N at each checkpoint
  std::vector<double> running_max_abs;  ///< max_{M<=N} |S_M|, over every M
};

/// Distinct values floor(gamma^i) <= n_max, plus n_max itself.
std::vector<std::uint64_t> checkpoint_grid(std::uint64_t n_max, double gamma);

/// Single streaming pass; memory is O(number of checkpoints).
TrajectoryCheckpoints simulate_trajectory(const ShapeFunction& f, const GapDistribution& dist, double x,
                                          std::uint64_t n_max, double gamma, std::uint64_t seed);

/// Gaussian random walk with unit-variance steps on the same checkpoint grid:
/// the Brownian comparison path at matched horizon.
TrajectoryCheckpoints simulate_gaussian_walk(std::uint64_t n_max, double gamma, std::uint64_t seed);

/// Normalized sums S_N / sqrt(2 N log log N) at checkpoints with N >= 16.
struct LilSequence {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> value;
  std::vector<double> running_max;          ///< of value
  std::vector<double> running_max_negated;  ///< of -value
};

LilSequence lil_statistic(const TrajectoryCheckpoints& traj);

/// sqrt(log log N / N) max_{M<=N} |S_M| at checkpoints with N >= 16.
struct ChungSequence {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> value;
  std::vector<double> running_min;
};

ChungSequence chung_statistic(const TrajectoryCheckpoints& traj);

/// KS test of S_N / sqrt(A_x N) over replications against N(0, 1). A_x comes
/// from `a_x` or, when absent, from limiting_variance. Throws InvalidInput
/// when A_x <= 0 or reps < 500.
TestReport clt_test(const ShapeFunction& f, const GapDistribution& dist, double x, std::uint64_t n,
                    std::size_t reps, std::uint64_t seed, const Executor& exec,
                    std::optional<double> a_x = std::nullopt);

/// Final LIL running maxima and Chung running minima over many seeds, with
/// the matched-horizon Gaussian-walk comparison.
struct LilChungSummary {
  double a_x = 0.0;
  std::vector<double> final_lil;
  std::vector<double> final_chung;
  std::vector<double> oracle_final_lil;    ///< unit variance
  std::vector<double> oracle_final_chung;  ///< unit variance
  double median_lil = 0.0;
  double median_chung = 0.0;
  double oracle_median_lil = 0.0;
  double oracle_median_chung = 0.0;
};

struct LilChungOptions {
  std::uint64_t n_max = 1'000'000;
  double gamma = 1.2;
  std::size_t seeds = 64;
  std::size_t oracle_paths = 64;
};

LilChungSummary lil_chung_summary(const ShapeFunction& f, const GapDistribution& dist, double x,
                                  const LilChungOptions& options, std::uint64_t seed, const Executor& exec,
                                  std::optional<double> a_x = std::nullopt);

/// Median final LIL running max against the band [lo, hi] * sqrt(A_x).
TestReport lil_report(const LilChungSummary& summary, double band_lo = 0.6, double band_hi = 1.2);
/// Median final Chung running min against [1/factor, factor] times the
/// oracle median scaled by sqrt(A_x). The printed constant 8/pi^2 is
/// reported alongside, not asserted.
TestReport chung_report(const LilChungSummary& summary, double factor = 2.0);

struct KefpResult {
  double partial_integral = 0.0;
  double exponent = 0.0;  ///< integrand ~ 1 / (t log t (log log t)^exponent)
  bool converges = false;
};

/// Integral test for phi_a(t) = sqrt(2 log log t + a log log log t) on
/// [16, t_max]. The verdict is analytic: converges iff (a - 1)/2 > 1.
KefpResult kefp_classify(double a, double t_max);

inline constexpr double kKefpStart = 16.0;

struct FourthMomentEstimate {
  double ratio = 0.0;  ///< E(sum a_k Y_k)^4 / (sum a_k^2)^2
  double std_err = 0.0;
};

/// Y_k = f(S_k x) minus its empirical mean over replications. Two passes
/// over identically seeded walks. Throws InvalidInput for all-zero weights
/// or reps < 10^4.
FourthMomentEstimate fourth_moment_ratio(const ShapeFunction& f, const GapDistribution& dist, double x,
                                         std::span<const double> weights, std::size_t reps,
                                         std::uint64_t seed, const Executor& exec);

}  // namespace lacunary
