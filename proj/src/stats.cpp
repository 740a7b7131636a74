#include "lacunary/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "lacunary/error.hpp"

namespace lacunary {

void RunningStats::push(double value) noexcept {
  ++count_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (value - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const double delta = other.mean_ - mean_;
  mean_ += delta * n_b / n;
  m2_ += other.m2_ + delta * delta * n_a * n_b / n;
  count_ += other.count_;
}

double RunningStats::variance() const noexcept {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::std_error() const noexcept {
  return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) {
    return 1.0;
  }
  // Alternating series converges fast for lambda >= 0.2; stop once terms
  // drop below double resolution.
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17 * std::abs(sum)) {
      break;
    }
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_standard_normal(std::vector<double> sample) {
  if (sample.empty()) {
    throw InvalidInput("KS test needs a nonempty sample");
  }
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = standard_normal_cdf(sample[i]);
    const double above = (static_cast<double>(i) + 1.0) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  const double root_n = std::sqrt(n);
  const double lambda = (root_n + 0.12 + 0.11 / root_n) * d;
  return {d, kolmogorov_survival(lambda)};
}

double chi_square_uniform_p_value(std::span<const std::size_t> counts) {
  if (counts.size() < 2) {
    throw InvalidInput("chi-square test needs at least two cells");
  }
  double total = 0.0;
  for (auto c : counts) {
    total += static_cast<double>(c);
  }
  if (total <= 0.0) {
    throw InvalidInput("chi-square test needs a nonempty sample");
  }
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw InvalidInput("median of an empty sequence");
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) {
    return upper;
  }
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace lacunary
