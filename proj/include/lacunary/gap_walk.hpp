#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lacunary/rng.hpp"

namespace lacunary {

enum class GapKind { Uniform, Triangular, RaisedCosine };

/// Law of the i.i.d. gaps X_k: bounded support [a, b] with a bounded density.
/// All three families have closed-form distribution and characteristic
/// functions.
class GapDistribution {
public:
  /// Uniform on [a, b].
  static GapDistribution uniform(double a, double b);
  /// Triangular on [a, b] with mode c, a < c < b.
  static GapDistribution triangular(double a, double c, double b);
  /// Density (1 - cos(2 pi (x - a) / (b - a))) / (b - a) on [a, b].
  static GapDistribution raised_cosine(double a, double b);

  GapKind kind() const noexcept { return kind_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  double mode() const noexcept { return c_; }

  double density(double x) const noexcept;
  double cdf(double x) const noexcept;
  double mean() const noexcept;
  double density_bound() const noexcept;
  double support_bound() const noexcept { return b_; }

  /// E exp(i t X).
  std::complex<double> char_fn(double t) const noexcept;

  /// One draw in (a, b].
  double sample(Xoshiro256& rng) const noexcept;

private:
  GapDistribution(GapKind kind, double a, double b, double c) : kind_(kind), a_(a), b_(b), c_(c) {}

  GapKind kind_;
  double a_;
  double b_;
  double c_;
};

inline std::complex<double> char_fn(const GapDistribution& dist, double t) noexcept {
  return dist.char_fn(t);
}

/// n i.i.d. gaps drawn from a generator seeded with `seed`.
std::vector<double> sample_gaps(const GapDistribution& dist, std::size_t n, std::uint64_t seed);

/// Incremental phase accumulator t_k = (t_{k-1} + x X_k) mod 1 with
/// compensated summation: the rounding error of each product and sum is
/// carried into the next step instead of being lost.
class PhaseWalker {
public:
  explicit PhaseWalker(double x, double start = 0.0) noexcept : x_(x), phase_(start) {}

  double advance(double gap) noexcept;
  double phase() const noexcept { return phase_; }

private:
  double x_;
  double phase_;
  double carry_ = 0.0;
};

struct WalkPhasePath {
  std::uint64_t seed = 0;
  double x = 0.0;
  std::vector<double> phases;  ///< t_1..t_N, all in [0, 1)
};

/// Phases S_k x mod 1 for k = 1..n. The gap sequence equals
/// sample_gaps(dist, n, seed). Throws InvalidInput for x == 0.
WalkPhasePath walk_phases(const GapDistribution& dist, double x, std::size_t n, std::uint64_t seed);

/// Same accumulation over an explicit gap sequence (test stubs, replays).
std::vector<double> walk_phases_from_gaps(std::span<const double> gaps, double x);

/// Discretized density of S_n x mod 1 on G cells. Bin J is a point mass at
/// (J + n/2) / G: each convolution adds half a cell of offset when masses
/// sit at cell centres.
struct Mod1Density {
  std::size_t grid_size = 0;
  std::size_t step = 0;
  std::vector<double> values;  ///< G * mass, averaging to 1

  double bin_center(std::size_t bin) const noexcept {
    return (static_cast<double>(bin) + 0.5 * static_cast<double>(step)) /
           static_cast<double>(grid_size);
  }
};

/// Exact probability of each cell [j/G, (j+1)/G) under x X_1 mod 1.
std::vector<double> cell_masses(const GapDistribution& dist, double x, std::size_t grid_size);

/// Successive convolution powers p_1, p_2, ... of one mod-1 gap density,
/// computed with a single forward transform.
class Mod1DensitySequence {
public:
  Mod1DensitySequence(const GapDistribution& dist, double x, std::size_t grid_size);
  ~Mod1DensitySequence();
  Mod1DensitySequence(Mod1DensitySequence&&) noexcept;
  Mod1DensitySequence& operator=(Mod1DensitySequence&&) noexcept;

  std::size_t grid_size() const noexcept { return grid_size_; }
  /// Step of the density `next()` will return.
  std::size_t next_step() const noexcept { return step_ + 1; }

  Mod1Density next();

private:
  struct Impl;
  std::size_t grid_size_;
  std::size_t step_ = 0;
  std::unique_ptr<Impl> impl_;
};

/// Density of S_n x mod 1 on a grid of G >= 256 cells (G a power of two).
Mod1Density mod1_density(const GapDistribution& dist, double x, std::size_t n, std::size_t grid_size);

/// max_J |values_J - 1|.
double uniformity_gap(const Mod1Density& p) noexcept;

/// Gaps below this are treated as floating-point noise by the decay fit.
inline constexpr double kGapNoiseFloor = 1e-14;

struct DecayPoint {
  std::size_t n = 0;
  double gap = 0.0;
};

struct DecayFit {
  double c = 0.0;           ///< least-squares intercept, exp scale
  double w = 0.0;           ///< least-squares rate in (0, 1)
  double r_squared = 0.0;
  double envelope_c = 0.0;  ///< smallest C' with gap_n <= C' w^n on fitted points
  std::vector<DecayPoint> points;  ///< every step, fitted or not
};

/// Fits log gap_n = log C + n log w over the points above the noise floor.
/// Throws DegenerateFit when fewer than two points remain or w >= 1.
DecayFit fit_geometric_decay(std::vector<DecayPoint> points);

/// Uniformity gaps for n = 2..n_max and their geometric fit.
DecayFit decay_fit(const GapDistribution& dist, double x, std::size_t n_max, std::size_t grid_size);

}  // namespace lacunary
