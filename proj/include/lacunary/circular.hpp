#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lacunary {

/// Real-to-complex DFT pair of fixed power-of-two length, used for circular
/// convolution on the unit circle grid. Backed by FFTW with estimate-mode
/// plans, which are deterministic for a given build.
class CircularTransform {
public:
  explicit CircularTransform(std::size_t size);
  ~CircularTransform();
  CircularTransform(CircularTransform&&) noexcept;
  CircularTransform& operator=(CircularTransform&&) noexcept;
  CircularTransform(const CircularTransform&) = delete;
  CircularTransform& operator=(const CircularTransform&) = delete;

  std::size_t size() const noexcept { return size_; }

  /// Unnormalized forward transform; returns size/2 + 1 coefficients.
  std::vector<std::complex<double>> forward(std::span<const double> values) const;

  /// Inverse transform including the 1/size normalization.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;

private:
  struct Plans;
  std::size_t size_;
  std::unique_ptr<Plans> plans_;
};

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace lacunary
