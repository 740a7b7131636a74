#include "lacunary/periodic_fn.hpp"

#include <algorithm>
#include <numbers>

#include "lacunary/error.hpp"

namespace lacunary {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Linear interpolation inside cell `cell` at local coordinate theta in [0, 1].
double cell_value(std::span<const double> v, std::size_t cell, double theta) noexcept {
  const std::size_t m = v.size();
  const double left = v[cell % m];
  const double right = v[(cell + 1) % m];
  return left + theta * (right - left);
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  const std::size_t degree = std::max(cos_.size(), sin_.size());
  cos_.resize(degree, 0.0);
  sin_.resize(degree, 0.0);
}

TrigPolynomial TrigPolynomial::cosine(double amplitude, int frequency) {
  std::vector<double> c(static_cast<std::size_t>(frequency), 0.0);
  c.back() = amplitude;
  return TrigPolynomial(std::move(c), {});
}

TrigPolynomial TrigPolynomial::scaled(double c) const {
  TrigPolynomial out = *this;
  for (auto& a : out.cos_) a *= c;
  for (auto& b : out.sin_) b *= c;
  return out;
}

double SampledLipschitz::lipschitz_constant() const noexcept {
  const std::size_t m = values_.size();
  double slope = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    slope = std::max(slope, std::abs(values_[(i + 1) % m] - values_[i]) * static_cast<double>(m));
  }
  return slope;
}

SampledLipschitz SampledLipschitz::scaled(double c) const {
  SampledLipschitz out = *this;
  for (auto& v : out.values_) v *= c;
  out.mean_correction_ *= c;
  return out;
}

SampledLipschitz mean_zero_project(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw InvalidInput("a sampled function needs at least 2 samples");
  }
  // The periodic piecewise-linear interpolant integrates to the plain
  // sample mean (trapezoid rule is exact for it).
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / static_cast<double>(samples.size());

  SampledLipschitz out;
  out.values_.reserve(samples.size());
  for (double s : samples) out.values_.push_back(s - mean);
  out.mean_correction_ = mean;
  return out;
}

SampledLipschitz sample_function(const ShapeFunction& f, std::size_t points) {
  std::vector<double> samples(points);
  for (std::size_t i = 0; i < points; ++i) {
    samples[i] = evaluate(f, static_cast<double>(i) / static_cast<double>(points));
  }
  return mean_zero_project(samples);
}

double evaluate(const TrigPolynomial& f, double t) noexcept {
  const double u = wrap_unit(t);
  double sum = 0.0;
  const auto a = f.cos_coeffs();
  const auto b = f.sin_coeffs();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double arg = kTwoPi * static_cast<double>(j + 1) * u;
    if (a[j] != 0.0) sum += a[j] * std::cos(arg);
    if (b[j] != 0.0) sum += b[j] * std::sin(arg);
  }
  return sum;
}

double evaluate(const SampledLipschitz& f, double t) noexcept {
  const auto v = f.values();
  const std::size_t m = v.size();
  if (m == 0) return 0.0;
  const double pos = wrap_unit(t) * static_cast<double>(m);
  std::size_t cell = static_cast<std::size_t>(pos);
  double theta = pos - static_cast<double>(cell);
  if (cell >= m) {
    cell = m - 1;
    theta = 1.0;
  }
  return cell_value(v, cell, theta);
}

double evaluate(const ShapeFunction& f, double t) noexcept {
  return std::visit([t](const auto& g) { return evaluate(g, t); }, f);
}

double l2_norm_sq(const TrigPolynomial& f) noexcept {
  double sum = 0.0;
  for (std::size_t j = 1; j <= f.degree(); ++j) sum += f.power(j);
  return sum;
}

double l2_norm_sq(const SampledLipschitz& f) noexcept {
  const auto v = f.values();
  const std::size_t m = v.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = v[i];
    const double b = v[(i + 1) % m];
    sum += a * a + a * b + b * b;
  }
  return m == 0 ? 0.0 : sum / (3.0 * static_cast<double>(m));
}

double l2_norm_sq(const ShapeFunction& f) noexcept {
  return std::visit([](const auto& g) { return l2_norm_sq(g); }, f);
}

double autocorrelation(const TrigPolynomial& f, double t) noexcept {
  const double u = wrap_unit(t);
  double sum = 0.0;
  for (std::size_t j = 1; j <= f.degree(); ++j) {
    const double p = f.power(j);
    if (p != 0.0) sum += p * std::cos(kTwoPi * static_cast<double>(j) * u);
  }
  return sum;
}

double autocorrelation(const SampledLipschitz& f, double t) noexcept {
  const auto v = f.values();
  const std::size_t m = v.size();
  if (m == 0) return 0.0;
  // Shift by s whole cells plus a fraction d of a cell. Every cell of f then
  // splits into at most two pieces on which both factors are linear, so the
  // product is quadratic and Simpson's rule integrates it exactly.
  const double pos = wrap_unit(t) * static_cast<double>(m);
  double whole = std::floor(pos);
  double d = pos - whole;
  std::size_t s = static_cast<std::size_t>(whole) % m;
  if (d >= 1.0) {
    d = 0.0;
    s = (s + 1) % m;
  }

  auto simpson = [&](std::size_t i, double lo, double hi, std::size_t j, double shift) {
    const double mid = 0.5 * (lo + hi);
    const double p0 = cell_value(v, i, lo) * cell_value(v, j, lo + shift);
    const double pm = cell_value(v, i, mid) * cell_value(v, j, mid + shift);
    const double p1 = cell_value(v, i, hi) * cell_value(v, j, hi + shift);
    return (hi - lo) * (p0 + 4.0 * pm + p1) / 6.0;
  };

  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + s;
    sum += simpson(i, 0.0, 1.0 - d, j, d);
    if (d > 0.0) sum += simpson(i, 1.0 - d, 1.0, j + 1, d - 1.0);
  }
  return sum / static_cast<double>(m);
}

double autocorrelation(const ShapeFunction& f, double t) noexcept {
  return std::visit([t](const auto& g) { return autocorrelation(g, t); }, f);
}

ShapeFunction scaled(const ShapeFunction& f, double c) {
  return std::visit([c](const auto& g) -> ShapeFunction { return g.scaled(c); }, f);
}

bool is_zero(const ShapeFunction& f) noexcept {
  if (const auto* trig = std::get_if<TrigPolynomial>(&f)) {
    return std::all_of(trig->cos_coeffs().begin(), trig->cos_coeffs().end(),
                       [](double a) { return a == 0.0; }) &&
           std::all_of(trig->sin_coeffs().begin(), trig->sin_coeffs().end(),
                       [](double b) { return b == 0.0; });
  }
  const auto v = std::get<SampledLipschitz>(f).values();
  return std::all_of(v.begin(), v.end(), [](double a) { return a == 0.0; });
}

}  // namespace lacunary
