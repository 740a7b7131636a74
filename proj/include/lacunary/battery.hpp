#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lacunary/gap_walk.hpp"
#include "lacunary/limit_lab.hpp"
#include "lacunary/parallel.hpp"
#include "lacunary/periodic_fn.hpp"
#include "lacunary/variance_ax.hpp"

namespace lacunary {

/// Sizes and bands of the full verification battery. Defaults are the
/// desk-scale acceptance settings.
struct BatteryConfig {
  ShapeFunction f = TrigPolynomial::cosine();
  GapDistribution dist = GapDistribution::uniform(0.0, 1.0);
  double x = 0.5;
  std::uint64_t seed = 20240601;

  std::size_t grid_size = 4096;
  std::size_t variance_k = 60;
  std::size_t variance_reps = 1'000'000;

  std::size_t decay_n_max = 30;

  std::uint64_t schedule_n = 100'000;
  std::uint64_t asymptotics_n = 1'000'000;

  std::vector<std::uint64_t> block_ns = {100, 200, 400};
  std::size_t block_reps = 10'000;

  std::uint64_t clt_n = 4096;
  std::size_t clt_reps = 2000;

  LilChungOptions lil;

  std::vector<std::size_t> moment_ns = {64, 256, 1024};
  std::size_t moment_reps = 10'000;

  std::vector<double> kefp_a = {0, 1, 2, 3, 4, 5, 10};
  double kefp_t_max = 1e12;
};

/// Three-way agreement verdict: the series within its tail bound (plus 1e-4)
/// and the Monte Carlo estimate within 4 standard errors of the closed form.
/// Sampled functions compare series and Monte Carlo only.
TestReport assess_variance(const VarianceReport& report, std::size_t reps);

TestReport check_variance(const BatteryConfig& config, const Executor& exec);
/// Diagnostic verdict when the fit is degenerate.
TestReport check_decay(const BatteryConfig& config);
TestReport check_schedule(const BatteryConfig& config);
TestReport check_schedule_asymptotics(const BatteryConfig& config);
/// Long-block ratio at the last block count inside [0.9, 1.1], with |ratio - 1|
/// nonincreasing along `block_ns`.
TestReport check_blocks(const BatteryConfig& config, const Executor& exec);
TestReport check_clt(const BatteryConfig& config, const Executor& exec, std::optional<double> a_x = std::nullopt);
LilChungSummary battery_lil_summary(const BatteryConfig& config, const Executor& exec,
                                    std::optional<double> a_x = std::nullopt);
/// Seed of trajectory `path` inside battery_lil_summary.
std::uint64_t lil_path_seed(const BatteryConfig& config, std::size_t path);
/// Spread of equal-weight ratios below 3 and no rise beyond 3 combined
/// standard errors from the first to the last n.
TestReport check_moment4(const BatteryConfig& config, const Executor& exec);
/// Verdicts match the rule a > 3 and partial integrals grow with t_max.
TestReport check_kefp(const BatteryConfig& config);

/// Runs every check with seeds derived from `config.seed`. The result is a
/// pure function of the config: identical for any worker count.
std::vector<TestReport> run_battery(const BatteryConfig& config, const Executor& exec);

}  // namespace lacunary
