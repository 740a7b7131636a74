#include "lacunary/gap_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lacunary/circular.hpp"
#include "lacunary/error.hpp"
#include "lacunary/periodic_fn.hpp"

namespace lacunary {
namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double z) noexcept {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// E exp(i s Y) for Y uniform on [0, 1].
cplx unit_uniform_cf(double s) noexcept {
  return std::polar(sinc(0.5 * s), 0.5 * s);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidInput(std::string("gap law parameter ") + name + " must be finite");
  }
}

void require_support(double a, double b) {
  require_finite(a, "a");
  require_finite(b, "b");
  if (a < 0.0) {
    throw InvalidInput("gap law needs a >= 0 (gaps must be positive)");
  }
  if (!(b > a)) {
    throw InvalidInput("gap law needs b > a");
  }
}

}  // namespace

GapDistribution GapDistribution::uniform(double a, double b) {
  require_support(a, b);
  return {GapKind::Uniform, a, b, 0.5 * (a + b)};
}

GapDistribution GapDistribution::triangular(double a, double c, double b) {
  require_support(a, b);
  require_finite(c, "c");
  if (!(a < c && c < b)) {
    throw InvalidInput("triangular gap law needs a < c < b");
  }
  return {GapKind::Triangular, a, b, c};
}

GapDistribution GapDistribution::raised_cosine(double a, double b) {
  require_support(a, b);
  return {GapKind::RaisedCosine, a, b, 0.5 * (a + b)};
}

double GapDistribution::density(double x) const noexcept {
  if (x < a_ || x > b_) return 0.0;
  const double len = b_ - a_;
  switch (kind_) {
    case GapKind::Uniform:
      return 1.0 / len;
    case GapKind::Triangular:
      return x <= c_ ? 2.0 * (x - a_) / (len * (c_ - a_)) : 2.0 * (b_ - x) / (len * (b_ - c_));
    case GapKind::RaisedCosine:
      return (1.0 - std::cos(kTwoPi * (x - a_) / len)) / len;
  }
  return 0.0;
}

double GapDistribution::cdf(double x) const noexcept {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  const double len = b_ - a_;
  switch (kind_) {
    case GapKind::Uniform:
      return (x - a_) / len;
    case GapKind::Triangular:
      if (x <= c_) return (x - a_) * (x - a_) / (len * (c_ - a_));
      return 1.0 - (b_ - x) * (b_ - x) / (len * (b_ - c_));
    case GapKind::RaisedCosine: {
      const double y = (x - a_) / len;
      return y - std::sin(kTwoPi * y) / kTwoPi;
    }
  }
  return 0.0;
}

double GapDistribution::mean() const noexcept {
  return kind_ == GapKind::Triangular ? (a_ + b_ + c_) / 3.0 : 0.5 * (a_ + b_);
}

double GapDistribution::density_bound() const noexcept {
  return (kind_ == GapKind::Uniform ? 1.0 : 2.0) / (b_ - a_);
}

cplx GapDistribution::char_fn(double t) const noexcept {
  const double len = b_ - a_;
  switch (kind_) {
    case GapKind::Uniform:
      return std::polar(1.0, t * a_) * unit_uniform_cf(t * len);
    case GapKind::RaisedCosine: {
      const double s = t * len;
      const cplx y = unit_uniform_cf(s) - 0.5 * (unit_uniform_cf(s + kTwoPi) + unit_uniform_cf(s - kTwoPi));
      return std::polar(1.0, t * a_) * y;
    }
    case GapKind::Triangular: {
      // Centre on the mode: Z = X - c is triangular on [lo, hi] with mode 0.
      const double lo = a_ - c_;
      const double hi = b_ - c_;
      const cplx shift = std::polar(1.0, t * c_);
      if (std::abs(t) * len < 1e-2) {
        // The closed form cancels badly near 0; use the Taylor series with
        // E Z^k = 2 (hi^{k+1} - lo^{k+1}) / ((hi - lo)(k+1)(k+2)).
        cplx sum = 1.0;
        cplx term = 1.0;
        double factorial = 1.0;
        for (int k = 1; k <= 5; ++k) {
          term *= cplx(0.0, t);
          factorial *= k;
          const double moment = 2.0 * (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (len * (k + 1) * (k + 2));
          sum += term * moment / factorial;
        }
        return shift * sum;
      }
      const cplx num = (hi * std::polar(1.0, t * lo)) - (len * cplx(1.0, 0.0)) - (lo * std::polar(1.0, t * hi));
      return shift * (-2.0 * num / (len * (-lo) * hi * t * t));
    }
  }
  return 1.0;
}

double GapDistribution::sample(Xoshiro256& rng) const noexcept {
  // v in (0, 1] so the inverse CDF lands in (a, b].
  const double v = 1.0 - rng.uniform();
  const double len = b_ - a_;
  switch (kind_) {
    case GapKind::Uniform:
      return a_ + len * v;
    case GapKind::Triangular: {
      const double split = (c_ - a_) / len;
      if (v < split) return a_ + std::sqrt(v * len * (c_ - a_));
      return b_ - std::sqrt((1.0 - v) * len * (b_ - c_));
    }
    case GapKind::RaisedCosine: {
      // Safeguarded Newton on F(y) = y - sin(2 pi y)/(2 pi) = v.
      double lo = 0.0;
      double hi = 1.0;
      double y = v;
      for (int it = 0; it < 100; ++it) {
        const double f = y - std::sin(kTwoPi * y) / kTwoPi - v;
        if (f > 0.0) hi = y; else lo = y;
        const double slope = 1.0 - std::cos(kTwoPi * y);
        double next = slope > 0.0 ? y - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - y) < 1e-15 || hi - lo < 1e-15) {
          y = next;
          break;
        }
        y = next;
      }
      return a_ + len * std::clamp(y, 0x1.0p-53, 1.0);
    }
  }
  return a_;
}

std::vector<double> sample_gaps(const GapDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) {
    throw InvalidInput("sample_gaps needs n >= 1");
  }
  Xoshiro256 rng(seed);
  std::vector<double> gaps(n);
  for (auto& g : gaps) g = dist.sample(rng);
  return gaps;
}

double PhaseWalker::advance(double gap) noexcept {
  const double prod = x_ * gap;
  const double prod_err = std::fma(x_, gap, -prod);
  const double small = prod_err + carry_;
  const double inc = prod + small;
  const double inc_err = small - (inc - prod);
  const double sum = phase_ + inc;
  const double back = sum - phase_;
  const double sum_err = (phase_ - (sum - back)) + (inc - back);
  carry_ = sum_err + inc_err;
  phase_ = wrap_unit(sum);
  return phase_;
}

WalkPhasePath walk_phases(const GapDistribution& dist, double x, std::size_t n, std::uint64_t seed) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  WalkPhasePath path;
  path.seed = seed;
  path.x = x;
  path.phases = walk_phases_from_gaps(sample_gaps(dist, n, seed), x);
  return path;
}

std::vector<double> walk_phases_from_gaps(std::span<const double> gaps, double x) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  PhaseWalker walker(x);
  std::vector<double> phases;
  phases.reserve(gaps.size());
  for (double g : gaps) phases.push_back(walker.advance(g));
  return phases;
}

std::vector<double> cell_masses(const GapDistribution& dist, double x, std::size_t grid_size) {
  if (x == 0.0) {
    throw InvalidInput("frequency multiplier x must be nonzero");
  }
  if (!is_power_of_two(grid_size)) {
    throw InvalidInput("grid size must be a power of two");
  }
  const double g = static_cast<double>(grid_size);
  const double lo_image = std::min(x * dist.lower(), x * dist.upper());
  const double hi_image = std::max(x * dist.lower(), x * dist.upper());
  const auto first = static_cast<long long>(std::floor(lo_image * g));
  const auto last = static_cast<long long>(std::ceil(hi_image * g));
  const auto cells = static_cast<long long>(grid_size);

  // Probability that x X lies below y, as a function of y.
  auto image_cdf = [&](double y) {
    const double pre = y / x;
    return x > 0.0 ? dist.cdf(pre) : 1.0 - dist.cdf(pre);
  };

  std::vector<double> masses(grid_size, 0.0);
  double prev = image_cdf(static_cast<double>(first) / g);
  for (long long k = first; k < last; ++k) {
    const double next = image_cdf(static_cast<double>(k + 1) / g);
    const long long cell = ((k % cells) + cells) % cells;
    masses[static_cast<std::size_t>(cell)] += next - prev;
    prev = next;
  }
  return masses;
}

struct Mod1DensitySequence::Impl {
  CircularTransform transform;
  std::vector<cplx> base;
  std::vector<cplx> current;
};

Mod1DensitySequence::Mod1DensitySequence(const GapDistribution& dist, double x, std::size_t grid_size)
    : grid_size_(grid_size) {
  if (!is_power_of_two(grid_size) || grid_size < 256) {
    throw InvalidInput("density grid size must be a power of two >= 256");
  }
  const auto masses = cell_masses(dist, x, grid_size);
  CircularTransform transform(grid_size);
  auto base = transform.forward(masses);
  impl_ = std::make_unique<Impl>(Impl{std::move(transform), base, {}});
}

Mod1DensitySequence::~Mod1DensitySequence() = default;
Mod1DensitySequence::Mod1DensitySequence(Mod1DensitySequence&&) noexcept = default;
Mod1DensitySequence& Mod1DensitySequence::operator=(Mod1DensitySequence&&) noexcept = default;

Mod1Density Mod1DensitySequence::next() {
  if (step_ == 0) {
    impl_->current = impl_->base;
  } else {
    for (std::size_t k = 0; k < impl_->current.size(); ++k) {
      impl_->current[k] *= impl_->base[k];
    }
  }
  ++step_;
  Mod1Density out;
  out.grid_size = grid_size_;
  out.step = step_;
  out.values = impl_->transform.inverse(impl_->current);
  const double g = static_cast<double>(grid_size_);
  for (auto& v : out.values) v *= g;
  return out;
}

Mod1Density mod1_density(const GapDistribution& dist, double x, std::size_t n, std::size_t grid_size) {
  if (n == 0) {
    throw InvalidInput("density step n must be >= 1");
  }
  Mod1DensitySequence seq(dist, x, grid_size);
  Mod1Density p = seq.next();
  while (p.step < n) p = seq.next();
  return p;
}

double uniformity_gap(const Mod1Density& p) noexcept {
  double gap = 0.0;
  for (double v : p.values) gap = std::max(gap, std::abs(v - 1.0));
  return gap;
}

DecayFit fit_geometric_decay(std::vector<DecayPoint> points) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (const auto& p : points) {
    if (!(p.gap >= kGapNoiseFloor)) continue;
    const double nx = static_cast<double>(p.n);
    const double ly = std::log(p.gap);
    sx += nx;
    sy += ly;
    sxx += nx * nx;
    sxy += nx * ly;
    ++used;
  }
  if (used < 2) {
    throw DegenerateFit("fewer than two uniformity gaps above the noise floor", used == 0);
  }
  const double m = static_cast<double>(used);
  const double denom = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  if (!(slope < 0.0)) {
    throw DegenerateFit("uniformity gaps do not decay", false);
  }

  DecayFit fit;
  fit.c = std::exp(intercept);
  fit.w = std::exp(slope);
  const double mean_y = sy / m;
  double ss_res = 0.0, ss_tot = 0.0;
  double envelope_log = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (!(p.gap >= kGapNoiseFloor)) continue;
    const double nx = static_cast<double>(p.n);
    const double ly = std::log(p.gap);
    const double pred = intercept + slope * nx;
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - mean_y) * (ly - mean_y);
    envelope_log = std::max(envelope_log, ly - slope * nx);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.envelope_c = std::exp(envelope_log);
  fit.points = std::move(points);
  return fit;
}

DecayFit decay_fit(const GapDistribution& dist, double x, std::size_t n_max, std::size_t grid_size) {
  if (n_max < 8) {
    throw InvalidInput("decay fit needs n_max >= 8");
  }
  Mod1DensitySequence seq(dist, x, grid_size);
  std::vector<DecayPoint> points;
  points.reserve(n_max - 1);
  seq.next();
  for (std::size_t n = 2; n <= n_max; ++n) {
    points.push_back({n, uniformity_gap(seq.next())});
  }
  return fit_geometric_decay(std::move(points));
}

}  // namespace lacunary
