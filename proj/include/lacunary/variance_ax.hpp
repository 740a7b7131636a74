#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lacunary/gap_walk.hpp"
#include "lacunary/parallel.hpp"
#include "lacunary/periodic_fn.hpp"

namespace lacunary {

/// Estimates of the limiting variance A_x = ||f||^2 + 2 sum_k E f(U) f(U + S_k x)
/// by three independent routes.
struct VarianceReport {
  std::optional<double> closed_form;        ///< trig polynomials only
  double series_truncated = 0.0;
  std::optional<double> series_tail_bound;  ///< absent when the decay fit fails
  double monte_carlo = 0.0;
  double monte_carlo_std_err = 0.0;
  std::size_t truncation_k = 0;
};

/// Geometric-series closed form through the gap characteristic function:
/// A_x = sum_j power_j (1 + 2 Re(phi_j / (1 - phi_j))), phi_j = phi(2 pi j x).
double ax_closed_form(const TrigPolynomial& f, const GapDistribution& dist, double x);
/// Throws UnsupportedRepresentation for sampled functions.
double ax_closed_form(const ShapeFunction& f, const GapDistribution& dist, double x);

struct SeriesEstimate {
  double value = 0.0;
  std::optional<double> tail_bound;
  std::vector<double> terms;  ///< E f(U) f(U + S_k x), k = 1..K
  std::optional<DecayFit> fit;
};

/// ||f||^2 + 2 sum_{k<=K} int r_f(t) p_k(t) dt over the discretized mod-1
/// densities, with tail bound 2 ||f||^2 C w^{K+1} / (1 - w) from the decay
/// envelope of the densities.
SeriesEstimate ax_series(const ShapeFunction& f, const GapDistribution& dist, double x,
                         std::size_t truncation, std::size_t grid_size);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
};

/// Direct simulation of the K-truncated A_x: per replication one uniform U
/// and one independent walk; replication r uses derive_seed(seed, r).
MonteCarloEstimate ax_monte_carlo(const ShapeFunction& f, const GapDistribution& dist, double x,
                                  std::size_t truncation, std::size_t reps, std::uint64_t seed,
                                  const Executor& exec);

/// Smallest K whose series tail bound is below 1e-6 ||f||^2.
std::size_t default_truncation(const GapDistribution& dist, double x, std::size_t grid_size);

struct VarianceOptions {
  std::optional<std::size_t> truncation;  ///< default_truncation when absent
  std::size_t grid_size = 4096;
  std::size_t reps = 1'000'000;
  std::uint64_t seed = 0;
};

VarianceReport variance_report(const ShapeFunction& f, const GapDistribution& dist, double x,
                               const VarianceOptions& options, const Executor& exec);

/// Best available deterministic A_x: the closed form for trig polynomials,
/// the series with default truncation otherwise.
double limiting_variance(const ShapeFunction& f, const GapDistribution& dist, double x,
                         std::size_t grid_size = 4096);

}  // namespace lacunary
