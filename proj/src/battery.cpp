#include "lacunary/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lacunary/block_schedule.hpp"
#include "lacunary/error.hpp"
#include "lacunary/variance_ax.hpp"

namespace lacunary {
namespace {

std::string format_tag(double a) {
  if (a == std::floor(a) && std::abs(a) < 1e9) return std::to_string(static_cast<long long>(a));
  return std::to_string(a);
}

enum Stream : std::uint64_t { kVariance = 1, kBlocks, kClt, kLil, kMoment };

}  // namespace

TestReport assess_variance(const VarianceReport& r, std::size_t reps) {
  TestReport report;
  report.name = "variance";
  report.sample_size = reps;
  report.details = {{"seriesTruncated", r.series_truncated},
                    {"monteCarlo", r.monte_carlo},
                    {"monteCarloStdErr", r.monte_carlo_std_err},
                    {"truncationK", static_cast<double>(r.truncation_k)}};
  if (r.series_tail_bound) report.details.emplace_back("seriesTailBound", *r.series_tail_bound);
  if (r.closed_form) {
    const double cf = *r.closed_form;
    report.statistic = cf;
    report.details.emplace_back("closedForm", cf);
    const bool series_ok = r.series_tail_bound && std::abs(cf - r.series_truncated) <= *r.series_tail_bound + 1e-4;
    const bool mc_ok = std::abs(cf - r.monte_carlo) <= 4.0 * r.monte_carlo_std_err + 1e-12;
    report.verdict = series_ok && mc_ok ? Verdict::Pass : Verdict::Fail;
  } else {
    // Sampled functions: two routes only.
    report.statistic = r.series_truncated;
    report.verdict = std::abs(r.series_truncated - r.monte_carlo) <= 4.0 * r.monte_carlo_std_err + 1e-4
                         ? Verdict::Pass
                         : Verdict::Fail;
  }
  return report;
}

TestReport check_variance(const BatteryConfig& c, const Executor& exec) {
  VarianceOptions opt;
  opt.truncation = c.variance_k;
  opt.grid_size = c.grid_size;
  opt.reps = c.variance_reps;
  opt.seed = derive_seed(c.seed, kVariance);
  return assess_variance(variance_report(c.f, c.dist, c.x, opt, exec), c.variance_reps);
}

TestReport check_decay(const BatteryConfig& c) {
  TestReport report;
  report.name = "decay";
  report.sample_size = c.decay_n_max - 1;
  try {
    const auto fit = decay_fit(c.dist, c.x, c.decay_n_max, c.grid_size);
    report.statistic = fit.w;
    report.details = {{"C", fit.c}, {"rSquared", fit.r_squared}, {"envelopeC", fit.envelope_c}};
    report.verdict = fit.r_squared >= 0.98 ? Verdict::Pass : Verdict::Fail;
  } catch (const DegenerateFit& e) {
    // Numerically uniform from the first step: nothing to fit.
    report.statistic = 0.0;
    report.details = {{"degenerate", 1.0}, {"allUnderflow", e.all_underflow() ? 1.0 : 0.0}};
    report.verdict = Verdict::Diagnostic;
  }
  return report;
}

TestReport check_schedule(const BatteryConfig& c) {
  const auto v = verify_schedule(c.schedule_n);
  TestReport report;
  report.name = "schedule";
  report.statistic = v.ok() ? 1.0 : 0.0;
  report.sample_size = v.checked;
  report.verdict = v.ok() ? Verdict::Pass : Verdict::Fail;
  report.details = {{"tiling", v.tiling ? 1.0 : 0.0},
                    {"sandwich", v.sandwich ? 1.0 : 0.0},
                    {"monotone", v.monotone ? 1.0 : 0.0},
                    {"closedForm", v.closed_form ? 1.0 : 0.0}};
  return report;
}

TestReport check_schedule_asymptotics(const BatteryConfig& c) {
  const auto a = schedule_asymptotics(c.asymptotics_n);
  TestReport report;
  report.name = "schedule-asymptotics";
  report.statistic = a.hat_ratio;
  report.band = std::make_pair(0.99, 1.01);
  report.sample_size = 1;
  const bool tilde_ok = a.tilde_ratio >= 0.999 && a.tilde_ratio <= 1.001;
  const bool hat_ok = a.hat_ratio >= 0.99 && a.hat_ratio <= 1.01;
  const bool remainder_ok = a.remainder_scaled <= 3.0;
  report.verdict = tilde_ok && hat_ok && remainder_ok ? Verdict::Pass : Verdict::Fail;
  report.details = {{"n", static_cast<double>(c.asymptotics_n)},
                    {"tildeRatio", a.tilde_ratio},
                    {"hatRatio", a.hat_ratio},
                    {"remainderScaled", a.remainder_scaled}};
  return report;
}

TestReport check_blocks(const BatteryConfig& c, const Executor& exec) {
  TestReport report;
  report.name = "block-variance";
  report.band = std::make_pair(0.9, 1.1);
  report.sample_size = c.block_reps;
  double previous_distance = std::numeric_limits<double>::infinity();
  bool trend_ok = true;
  double last = 0.0;
  for (std::uint64_t n : c.block_ns) {
    const auto r = block_variance_ratio(c.f, c.dist, c.x, n, c.block_reps, derive_seed(c.seed, kBlocks), exec);
    report.details.emplace_back("ratioLong_n" + std::to_string(n), r.ratio_long);
    report.details.emplace_back("ratioShort_n" + std::to_string(n), r.ratio_short);
    const double distance = std::abs(r.ratio_long - 1.0);
    trend_ok = trend_ok && distance <= previous_distance;
    previous_distance = distance;
    last = r.ratio_long;
  }
  report.statistic = last;
  report.details.emplace_back("trendTowardOne", trend_ok ? 1.0 : 0.0);
  report.verdict = trend_ok && last >= 0.9 && last <= 1.1 ? Verdict::Pass : Verdict::Fail;
  return report;
}

TestReport check_moment4(const BatteryConfig& c, const Executor& exec) {
  TestReport report;
  report.name = "moment4";
  report.sample_size = c.moment_reps;
  std::vector<FourthMomentEstimate> est;
  for (std::size_t n : c.moment_ns) {
    const std::vector<double> weights(n, 1.0);
    est.push_back(fourth_moment_ratio(c.f, c.dist, c.x, weights, c.moment_reps, derive_seed(c.seed, kMoment), exec));
    report.details.emplace_back("ratio_n" + std::to_string(n), est.back().ratio);
    report.details.emplace_back("stdErr_n" + std::to_string(n), est.back().std_err);
  }
  const auto [lo, hi] = std::minmax_element(est.begin(), est.end(),
                                            [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
  const double spread = hi->ratio / lo->ratio;
  const auto& first = est.front();
  const auto& last = est.back();
  const bool no_rise =
      last.ratio <= first.ratio + 3.0 * std::hypot(first.std_err, last.std_err);
  report.statistic = spread;
  report.band = std::make_pair(1.0, 3.0);
  report.details.emplace_back("noIncreasingTrend", no_rise ? 1.0 : 0.0);
  report.verdict = spread < 3.0 && no_rise ? Verdict::Pass : Verdict::Fail;
  return report;
}

TestReport check_kefp(const BatteryConfig& c) {
  TestReport report;
  report.name = "kefp";
  report.sample_size = c.kefp_a.size();
  bool ok = true;
  for (double a : c.kefp_a) {
    const auto r = kefp_classify(a, c.kefp_t_max);
    const auto half = kefp_classify(a, std::sqrt(c.kefp_t_max));
    ok = ok && r.converges == (a > 3.0) && half.partial_integral <= r.partial_integral;
    const std::string tag = "a" + format_tag(a);
    report.details.emplace_back(tag + "_converges", r.converges ? 1.0 : 0.0);
    report.details.emplace_back(tag + "_partialIntegral", r.partial_integral);
  }
  report.statistic = ok ? 1.0 : 0.0;
  report.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return report;
}

TestReport check_clt(const BatteryConfig& c, const Executor& exec, std::optional<double> a_x) {
  return clt_test(c.f, c.dist, c.x, c.clt_n, c.clt_reps, derive_seed(c.seed, kClt), exec, a_x);
}

LilChungSummary battery_lil_summary(const BatteryConfig& c, const Executor& exec, std::optional<double> a_x) {
  return lil_chung_summary(c.f, c.dist, c.x, c.lil, derive_seed(c.seed, kLil), exec, a_x);
}

std::uint64_t lil_path_seed(const BatteryConfig& c, std::size_t path) {
  return derive_seed(derive_seed(c.seed, kLil), path);
}

std::vector<TestReport> run_battery(const BatteryConfig& c, const Executor& exec) {
  std::vector<TestReport> reports;
  reports.push_back(check_variance(c, exec));
  reports.push_back(check_decay(c));
  reports.push_back(check_schedule(c));
  reports.push_back(check_schedule_asymptotics(c));
  reports.push_back(check_blocks(c, exec));

  const double a_x = limiting_variance(c.f, c.dist, c.x, c.grid_size);
  reports.push_back(check_clt(c, exec, a_x));
  const auto summary = battery_lil_summary(c, exec, a_x);
  reports.push_back(lil_report(summary));
  reports.push_back(chung_report(summary));

  reports.push_back(check_moment4(c, exec));
  reports.push_back(check_kefp(c));
  return reports;
}

}  // namespace lacunary
