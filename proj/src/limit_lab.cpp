#include "lacunary/limit_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lacunary/error.hpp"
#include "lacunary/stats.hpp"
#include "lacunary/variance_ax.hpp"

namespace lacunary {
namespace {

constexpr std::uint64_t kFirstLogLogCheckpoint = 16;
// Keeps oracle paths on streams disjoint from the trajectories.
constexpr std::uint64_t kOracleStream = 0x6F7261636C65ULL;

void check_trajectory_args(std::uint64_t n_max, double gamma) {
  if (n_max < 1000) {
    throw InvalidInput("trajectory horizon must be >= 1000");
  }
  if (!(gamma > 1.0 && gamma <= 2.0)) {
    throw InvalidInput("checkpoint ratio gamma must lie in (1, 2]");
  }
}

double resolve_a_x(const ShapeFunction& f, const GapDistribution& dist, double x, std::optional<double> a_x) {
  const double value = a_x ? *a_x : limiting_variance(f, dist, x);
  if (!(value > 0.0)) {
    throw InvalidInput("A_x must be positive");
  }
  return value;
}

// Shared streaming loop: `next_term()` yields the k-th summand.
template <class NextTerm>
TrajectoryCheckpoints record_checkpoints(std::uint64_t n_max, double gamma, NextTerm&& next_term) {
  TrajectoryCheckpoints traj;
  traj.checkpoints = checkpoint_grid(n_max, gamma);
  traj.partial_sums.reserve(traj.checkpoints.size());
  traj.running_max_abs.reserve(traj.checkpoints.size());
  double sum = 0.0;
  double max_abs = 0.0;
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    sum += next_term();
    max_abs = std::max(max_abs, std::abs(sum));
    if (k == traj.checkpoints[next]) {
      traj.partial_sums.push_back(sum);
      traj.running_max_abs.push_back(max_abs);
      ++next;
    }
  }
  return traj;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Diagnostic: return "diagnostic";
  }
  return "diagnostic";
}

double TestReport::detail(const std::string& key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  throw InvalidInput("report '" + name + "' has no detail '" + key + "'");
}

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t n_max, double gamma) {
  std::vector<std::uint64_t> grid;
  for (int i = 0;; ++i) {
    const double v = std::floor(std::pow(gamma, i));
    if (v > static_cast<double>(n_max)) break;
    const auto n = static_cast<std::uint64_t>(v);
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.empty() || grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

TrajectoryCheckpoints simulate_trajectory(const ShapeFunction& f, const GapDistribution& dist, double x,
                                          std::uint64_t n_max, double gamma, std::uint64_t seed) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  check_trajectory_args(n_max, gamma);
  Xoshiro256 rng(seed);
  PhaseWalker walker(x);
  auto traj = record_checkpoints(n_max, gamma, [&] { return evaluate(f, walker.advance(dist.sample(rng))); });
  traj.seed = seed;
  traj.x = x;
  return traj;
}

TrajectoryCheckpoints simulate_gaussian_walk(std::uint64_t n_max, double gamma, std::uint64_t seed) {
  check_trajectory_args(n_max, gamma);
  Xoshiro256 rng(seed);
  auto traj = record_checkpoints(n_max, gamma, [&] { return rng.normal(); });
  traj.seed = seed;
  return traj;
}

LilSequence lil_statistic(const TrajectoryCheckpoints& traj) {
  LilSequence out;
  double best = -std::numeric_limits<double>::infinity();
  double best_neg = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.checkpoints.size(); ++i) {
    const std::uint64_t n = traj.checkpoints[i];
    if (n < kFirstLogLogCheckpoint) continue;
    const double nd = static_cast<double>(n);
    const double v = traj.partial_sums[i] / std::sqrt(2.0 * nd * std::log(std::log(nd)));
    best = std::max(best, v);
    best_neg = std::max(best_neg, -v);
    out.checkpoints.push_back(n);
    out.value.push_back(v);
    out.running_max.push_back(best);
    out.running_max_negated.push_back(best_neg);
  }
  return out;
}

ChungSequence chung_statistic(const TrajectoryCheckpoints& traj) {
  ChungSequence out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.checkpoints.size(); ++i) {
    const std::uint64_t n = traj.checkpoints[i];
    if (n < kFirstLogLogCheckpoint) continue;
    const double nd = static_cast<double>(n);
    const double v = std::sqrt(std::log(std::log(nd)) / nd) * traj.running_max_abs[i];
    best = std::min(best, v);
    out.checkpoints.push_back(n);
    out.value.push_back(v);
    out.running_min.push_back(best);
  }
  return out;
}

TestReport clt_test(const ShapeFunction& f, const GapDistribution& dist, double x, std::uint64_t n,
                    std::size_t reps, std::uint64_t seed, const Executor& exec, std::optional<double> a_x) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  if (reps < 500) {
    throw InvalidInput("CLT test needs reps >= 500");
  }
  if (n == 0) {
    throw InvalidInput("CLT test needs N >= 1");
  }
  const double variance = resolve_a_x(f, dist, x, a_x);

  std::vector<double> scaled(reps);
  exec.for_each_index(reps, [&](std::size_t r) {
    Xoshiro256 rng(derive_seed(seed, r));
    PhaseWalker walker(x);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) sum += evaluate(f, walker.advance(dist.sample(rng)));
    scaled[r] = sum / std::sqrt(static_cast<double>(n));
  });

  RunningStats stats;
  for (double s : scaled) stats.push(s);
  std::vector<double> z(reps);
  const double norm = std::sqrt(variance);
  std::transform(scaled.begin(), scaled.end(), z.begin(), [norm](double s) { return s / norm; });
  const auto ks = ks_test_standard_normal(std::move(z));

  TestReport report;
  report.name = "clt";
  report.statistic = ks.statistic;
  report.p_value = ks.p_value;
  report.sample_size = reps;
  report.verdict = ks.p_value > 1e-3 ? Verdict::Pass : Verdict::Fail;
  report.details = {{"N", static_cast<double>(n)},
                    {"a_x", variance},
                    {"sample_variance", stats.variance()},
                    {"variance_relative_error", std::abs(stats.variance() - variance) / variance}};
  return report;
}

LilChungSummary lil_chung_summary(const ShapeFunction& f, const GapDistribution& dist, double x,
                                  const LilChungOptions& options, std::uint64_t seed, const Executor& exec,
                                  std::optional<double> a_x) {
  if (options.seeds == 0 || options.oracle_paths == 0) {
    throw InvalidInput("LIL summary needs at least one trajectory and one oracle path");
  }
  LilChungSummary out;
  out.a_x = resolve_a_x(f, dist, x, a_x);
  out.final_lil.resize(options.seeds);
  out.final_chung.resize(options.seeds);
  out.oracle_final_lil.resize(options.oracle_paths);
  out.oracle_final_chung.resize(options.oracle_paths);

  const std::size_t tasks = options.seeds + options.oracle_paths;
  exec.for_each_index(tasks, [&](std::size_t i) {
    if (i < options.seeds) {
      const auto traj = simulate_trajectory(f, dist, x, options.n_max, options.gamma, derive_seed(seed, i));
      out.final_lil[i] = lil_statistic(traj).running_max.back();
      out.final_chung[i] = chung_statistic(traj).running_min.back();
    } else {
      const std::size_t j = i - options.seeds;
      const auto traj = simulate_gaussian_walk(options.n_max, options.gamma,
                                               derive_seed(seed ^ kOracleStream, j));
      out.oracle_final_lil[j] = lil_statistic(traj).running_max.back();
      out.oracle_final_chung[j] = chung_statistic(traj).running_min.back();
    }
  });
  out.median_lil = median(out.final_lil);
  out.median_chung = median(out.final_chung);
  out.oracle_median_lil = median(out.oracle_final_lil);
  out.oracle_median_chung = median(out.oracle_final_chung);
  return out;
}

TestReport lil_report(const LilChungSummary& s, double band_lo, double band_hi) {
  const double root = std::sqrt(s.a_x);
  TestReport report;
  report.name = "lil";
  report.statistic = s.median_lil / root;
  report.band = std::make_pair(band_lo, band_hi);
  report.sample_size = s.final_lil.size();
  report.verdict = report.statistic >= band_lo && report.statistic <= band_hi ? Verdict::Pass : Verdict::Fail;
  report.details = {{"a_x", s.a_x},
                    {"median_final_running_max", s.median_lil},
                    {"oracle_median_unit", s.oracle_median_lil},
                    {"oracle_paths", static_cast<double>(s.oracle_final_lil.size())}};
  return report;
}

TestReport chung_report(const LilChungSummary& s, double factor) {
  const double target = s.oracle_median_chung * std::sqrt(s.a_x);
  TestReport report;
  report.name = "chung";
  report.statistic = s.median_chung;
  report.band = std::make_pair(target / factor, target * factor);
  report.sample_size = s.final_chung.size();
  report.verdict = Verdict::Diagnostic;
  const bool inside = s.median_chung >= target / factor && s.median_chung <= target * factor;
  report.details = {{"a_x", s.a_x},
                    {"oracle_median_unit", s.oracle_median_chung},
                    {"oracle_scaled", target},
                    {"within_band", inside ? 1.0 : 0.0},
                    {"printed_constant_scaled", 8.0 / (std::numbers::pi * std::numbers::pi) * std::sqrt(s.a_x)},
                    {"classical_constant_scaled", std::numbers::pi / std::sqrt(8.0) * std::sqrt(s.a_x)}};
  return report;
}

KefpResult kefp_classify(double a, double t_max) {
  if (!(t_max >= kKefpStart)) {
    throw InvalidInput("KEFP partial integral needs t_max >= 16");
  }
  // With u = log log t the integrand (phi/t) exp(-phi^2/2) dt becomes
  // sqrt(2u + a log u) u^{-a/2} du.
  auto integrand = [a](double u) {
    const double radicand = 2.0 * u + a * std::log(u);
    return radicand > 0.0 ? std::sqrt(radicand) * std::pow(u, -0.5 * a) : 0.0;
  };
  const double u0 = std::log(std::log(kKefpStart));
  const double u1 = std::log(std::log(t_max));
  KefpResult out;
  out.partial_integral =
      u1 > u0 ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, u0, u1, 15, 1e-12) : 0.0;
  out.exponent = 0.5 * (a - 1.0);
  out.converges = out.exponent > 1.0;
  return out;
}

FourthMomentEstimate fourth_moment_ratio(const ShapeFunction& f, const GapDistribution& dist, double x,
                                         std::span<const double> weights, std::size_t reps,
                                         std::uint64_t seed, const Executor& exec) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  if (reps < 10'000) {
    throw InvalidInput("fourth moment needs reps >= 10^4");
  }
  double weight_sq = 0.0;
  for (double w : weights) weight_sq += w * w;
  if (!(weight_sq > 0.0)) {
    throw InvalidInput("fourth moment needs a nonzero weight");
  }
  const std::size_t n = weights.size();

  auto replay = [&](std::size_t r, auto&& visit) {
    Xoshiro256 rng(derive_seed(seed, r));
    PhaseWalker walker(x);
    for (std::size_t k = 0; k < n; ++k) visit(k, evaluate(f, walker.advance(dist.sample(rng))));
  };

  const auto sums = map_chunks(exec, reps, kReplicationChunk, [&](std::size_t begin, std::size_t end) {
    std::vector<double> s(n, 0.0);
    for (std::size_t r = begin; r < end; ++r) replay(r, [&](std::size_t k, double v) { s[k] += v; });
    return s;
  });
  std::vector<double> mean(n, 0.0);
  for (const auto& s : sums) {
    for (std::size_t k = 0; k < n; ++k) mean[k] += s[k];
  }
  for (auto& m : mean) m /= static_cast<double>(reps);

  const auto chunks = map_chunks(exec, reps, kReplicationChunk, [&](std::size_t begin, std::size_t end) {
    RunningStats stats;
    for (std::size_t r = begin; r < end; ++r) {
      double z = 0.0;
      replay(r, [&](std::size_t k, double v) { z += weights[k] * (v - mean[k]); });
      const double z2 = z * z;
      stats.push(z2 * z2);
    }
    return stats;
  });
  RunningStats total;
  for (const auto& c : chunks) total.merge(c);
  const double denom = weight_sq * weight_sq;
  return {total.mean() / denom, total.std_error() / denom};
}

}  // namespace lacunary
