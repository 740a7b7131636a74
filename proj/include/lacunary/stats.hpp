#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lacunary {

/// Streaming mean/variance (Welford). `merge` combines partial results; the
/// combination order must be fixed by the caller for bit reproducibility.
class RunningStats {
public:
  void push(double value) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two values.
  double variance() const noexcept;
  double std_error() const noexcept;

private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct KsResult {
  double statistic = 0.0;  ///< sup |F_n - F|
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against the standard normal law.
/// The p-value uses the limiting Kolmogorov distribution with Stephens'
/// small-sample correction.
KsResult ks_test_standard_normal(std::vector<double> sample);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

double standard_normal_cdf(double z);

/// Pearson chi-square test of equal cell probabilities. Returns the p-value.
double chi_square_uniform_p_value(std::span<const std::size_t> counts);

/// Median (average of the two middle values for even sizes). Copies.
double median(std::vector<double> values);

}  // namespace lacunary
