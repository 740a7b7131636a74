#include "lacunary/variance_ax.hpp"

#include <cmath>
#include <numbers>

#include "lacunary/error.hpp"
#include "lacunary/stats.hpp"

namespace lacunary {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRelativeTailTarget = 1e-6;

void require_nonzero(double x) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
}

}  // namespace

double ax_closed_form(const TrigPolynomial& f, const GapDistribution& dist, double x) {
  require_nonzero(x);
  double total = 0.0;
  for (std::size_t j = 1; j <= f.degree(); ++j) {
    const double power = f.power(j);
    if (power == 0.0) continue;
    const auto phi = dist.char_fn(kTwoPi * static_cast<double>(j) * x);
    total += power * (1.0 + 2.0 * (phi / (1.0 - phi)).real());
  }
  return total;
}

double ax_closed_form(const ShapeFunction& f, const GapDistribution& dist, double x) {
  if (const auto* trig = std::get_if<TrigPolynomial>(&f)) {
    return ax_closed_form(*trig, dist, x);
  }
  throw UnsupportedRepresentation(
      "closed-form A_x needs a trig polynomial; use the series or Monte Carlo routes");
}

SeriesEstimate ax_series(const ShapeFunction& f, const GapDistribution& dist, double x,
                         std::size_t truncation, std::size_t grid_size) {
  require_nonzero(x);
  if (truncation == 0) {
    throw InvalidInput("series truncation K must be >= 1");
  }
  const double norm_sq = l2_norm_sq(f);

  // Step-k bin J sits at (2J + k) / (2G), so r_f is only ever needed on the
  // half-cell lattice.
  const std::size_t lattice = 2 * grid_size;
  std::vector<double> r_table(lattice);
  for (std::size_t i = 0; i < lattice; ++i) {
    r_table[i] = autocorrelation(f, static_cast<double>(i) / static_cast<double>(lattice));
  }

  Mod1DensitySequence seq(dist, x, grid_size);
  const std::size_t fit_max = std::max<std::size_t>(truncation, 8);
  const double inv_g = 1.0 / static_cast<double>(grid_size);

  SeriesEstimate out;
  out.terms.reserve(truncation);
  std::vector<DecayPoint> points;
  double term_sum = 0.0;
  for (std::size_t k = 1; k <= fit_max; ++k) {
    const Mod1Density p = seq.next();
    if (k >= 2) {
      points.push_back({k, uniformity_gap(p)});
    }
    if (k > truncation) continue;
    double term = 0.0;
    for (std::size_t bin = 0; bin < grid_size; ++bin) {
      term += p.values[bin] * r_table[(2 * bin + k) % lattice];
    }
    term *= inv_g;
    out.terms.push_back(term);
    term_sum += term;
  }
  out.value = norm_sq + 2.0 * term_sum;

  try {
    DecayFit fit = fit_geometric_decay(std::move(points));
    out.tail_bound = 2.0 * norm_sq * fit.envelope_c * std::pow(fit.w, static_cast<double>(truncation + 1)) /
                     (1.0 - fit.w);
    out.fit = std::move(fit);
  } catch (const DegenerateFit& e) {
    // Every density was uniform to rounding: the remaining terms vanish.
    if (e.all_underflow()) out.tail_bound = 0.0;
  }
  return out;
}

MonteCarloEstimate ax_monte_carlo(const ShapeFunction& f, const GapDistribution& dist, double x,
                                  std::size_t truncation, std::size_t reps, std::uint64_t seed,
                                  const Executor& exec) {
  require_nonzero(x);
  if (reps < 1000) {
    throw InvalidInput("Monte Carlo A_x needs reps >= 1000");
  }
  if (truncation == 0) {
    throw InvalidInput("series truncation K must be >= 1");
  }
  const auto chunks = map_chunks(exec, reps, kReplicationChunk, [&](std::size_t begin, std::size_t end) {
    RunningStats stats;
    for (std::size_t r = begin; r < end; ++r) {
      Xoshiro256 rng(derive_seed(seed, r));
      const double u = rng.uniform();
      const double fu = evaluate(f, u);
      PhaseWalker walker(x, u);
      double cross = 0.0;
      for (std::size_t k = 1; k <= truncation; ++k) {
        cross += evaluate(f, walker.advance(dist.sample(rng)));
      }
      stats.push(fu * cross);
    }
    return stats;
  });
  RunningStats total;
  for (const auto& c : chunks) total.merge(c);
  return {l2_norm_sq(f) + 2.0 * total.mean(), 2.0 * total.std_error()};
}

std::size_t default_truncation(const GapDistribution& dist, double x, std::size_t grid_size) {
  constexpr std::size_t kProbe = 64;
  DecayFit fit;
  try {
    fit = decay_fit(dist, x, kProbe, grid_size);
  } catch (const DegenerateFit& e) {
    return e.all_underflow() ? 1 : kProbe;
  }
  // 2 C w^{K+1} / (1 - w) < target  <=>  K + 1 > log(target (1 - w) / 2C) / log w
  const double bound = std::log(kRelativeTailTarget * (1.0 - fit.w) / (2.0 * fit.envelope_c)) / std::log(fit.w);
  const double k = std::max(1.0, std::floor(bound));
  return static_cast<std::size_t>(std::min(k, 1e6));
}

VarianceReport variance_report(const ShapeFunction& f, const GapDistribution& dist, double x,
                               const VarianceOptions& options, const Executor& exec) {
  require_nonzero(x);
  VarianceReport report;
  report.truncation_k = options.truncation.value_or(default_truncation(dist, x, options.grid_size));
  if (std::holds_alternative<TrigPolynomial>(f)) {
    report.closed_form = ax_closed_form(f, dist, x);
  }
  const auto series = ax_series(f, dist, x, report.truncation_k, options.grid_size);
  report.series_truncated = series.value;
  report.series_tail_bound = series.tail_bound;
  const auto mc = ax_monte_carlo(f, dist, x, report.truncation_k, options.reps, options.seed, exec);
  report.monte_carlo = mc.estimate;
  report.monte_carlo_std_err = mc.std_err;
  return report;
}

double limiting_variance(const ShapeFunction& f, const GapDistribution& dist, double x,
                         std::size_t grid_size) {
  if (std::holds_alternative<TrigPolynomial>(f)) {
    return ax_closed_form(f, dist, x);
  }
  return ax_series(f, dist, x, default_truncation(dist, x, grid_size), grid_size).value;
}

}  // namespace lacunary
