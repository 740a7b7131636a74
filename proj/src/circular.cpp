#include "lacunary/circular.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "lacunary/error.hpp"

namespace lacunary {
namespace {

// FFTW planning is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct CircularTransform::Plans {
  explicit Plans(std::size_t n)
      : real(fftw_alloc_real(n)), spectrum(fftw_alloc_complex(n / 2 + 1)) {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    forward = fftw_plan_dft_r2c_1d(len, real, spectrum, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(len, spectrum, real, FFTW_ESTIMATE);
  }

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spectrum);
  }

  double* real;
  fftw_complex* spectrum;
  fftw_plan forward;
  fftw_plan backward;
};

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

CircularTransform::CircularTransform(std::size_t size) : size_(size) {
  if (!is_power_of_two(size) || size < 2) {
    throw InvalidInput("transform length must be a power of two");
  }
  plans_ = std::make_unique<Plans>(size);
}

CircularTransform::~CircularTransform() = default;
CircularTransform::CircularTransform(CircularTransform&&) noexcept = default;
CircularTransform& CircularTransform::operator=(CircularTransform&&) noexcept = default;

std::vector<std::complex<double>> CircularTransform::forward(std::span<const double> values) const {
  if (values.size() != size_) {
    throw InvalidInput("forward transform: length mismatch");
  }
  // Plans are shared, so execution uses the new-array interface on private
  // buffers.
  double* in = fftw_alloc_real(size_);
  fftw_complex* out = fftw_alloc_complex(size_ / 2 + 1);
  std::copy(values.begin(), values.end(), in);
  fftw_execute_dft_r2c(plans_->forward, in, out);
  std::vector<std::complex<double>> result(size_ / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) {
    result[k] = {out[k][0], out[k][1]};
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

std::vector<double> CircularTransform::inverse(std::span<const std::complex<double>> spectrum) const {
  if (spectrum.size() != size_ / 2 + 1) {
    throw InvalidInput("inverse transform: length mismatch");
  }
  fftw_complex* in = fftw_alloc_complex(size_ / 2 + 1);
  double* out = fftw_alloc_real(size_);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plans_->backward, in, out);
  const double scale = 1.0 / static_cast<double>(size_);
  std::vector<double> result(out, out + size_);
  for (auto& v : result) v *= scale;
  fftw_free(in);
  fftw_free(out);
  return result;
}

}  // namespace lacunary
