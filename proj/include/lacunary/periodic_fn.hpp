#pragma once

#include <cmath>
#include <span>
#include <variant>
#include <vector>

namespace lacunary {

/// Reduces t into [0, 1) with floor-based reduction.
inline double wrap_unit(double t) noexcept {
  double r = t - std::floor(t);
  // t slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

/// f(t) = sum_j a_j cos(2 pi j t) + b_j sin(2 pi j t), j = 1..J.
/// There is no constant term, so f integrates to zero over a period.
class TrigPolynomial {
public:
  TrigPolynomial() = default;
  /// Shorter coefficient list is zero-padded.
  TrigPolynomial(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static TrigPolynomial cosine(double amplitude = 1.0, int frequency = 1);

  std::size_t degree() const noexcept { return cos_.size(); }
  std::span<const double> cos_coeffs() const noexcept { return cos_; }
  std::span<const double> sin_coeffs() const noexcept { return sin_; }

  /// Half the squared coefficient magnitude per frequency: the
  /// autocorrelation is sum_j power(j) cos(2 pi j t).
  double power(std::size_t j) const noexcept {
    return 0.5 * (cos_[j - 1] * cos_[j - 1] + sin_[j - 1] * sin_[j - 1]);
  }

  TrigPolynomial scaled(double c) const;

private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Periodic piecewise-linear interpolant through M equally spaced samples on
/// [0, 1), shifted so its exact integral is zero.
class SampledLipschitz {
public:
  SampledLipschitz() = default;

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  /// The constant that was subtracted from the raw samples.
  double mean_correction() const noexcept { return mean_correction_; }
  /// Largest |slope| of the interpolant.
  double lipschitz_constant() const noexcept;

  SampledLipschitz scaled(double c) const;

private:
  friend SampledLipschitz mean_zero_project(std::span<const double> samples);

  std::vector<double> values_;
  double mean_correction_ = 0.0;
};

using ShapeFunction = std::variant<TrigPolynomial, SampledLipschitz>;

/// Builds the zero-mean interpolant through `samples`. Throws InvalidInput
/// for fewer than two samples.
SampledLipschitz mean_zero_project(std::span<const double> samples);

/// Samples `f` at M equally spaced points and projects.
SampledLipschitz sample_function(const ShapeFunction& f, std::size_t points);

double evaluate(const TrigPolynomial& f, double t) noexcept;
double evaluate(const SampledLipschitz& f, double t) noexcept;
double evaluate(const ShapeFunction& f, double t) noexcept;

double l2_norm_sq(const TrigPolynomial& f) noexcept;
double l2_norm_sq(const SampledLipschitz& f) noexcept;
double l2_norm_sq(const ShapeFunction& f) noexcept;

/// r_f(t) = int_0^1 f(u) f(u + t) du.
double autocorrelation(const TrigPolynomial& f, double t) noexcept;
double autocorrelation(const SampledLipschitz& f, double t) noexcept;
double autocorrelation(const ShapeFunction& f, double t) noexcept;

ShapeFunction scaled(const ShapeFunction& f, double c);

bool is_zero(const ShapeFunction& f) noexcept;

}  // namespace lacunary
