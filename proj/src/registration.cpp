#include "ccdsim/registration.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numeric>

#include "ccdsim/image.hpp"

namespace ccdsim {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(inverse_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> x) {
    std::copy(x.begin(), x.end(), real_);
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(n_ / 2 + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {spec_[i][0], spec_[i][1]};
    return out;
  }

  std::vector<double> inverse(const std::vector<std::complex<double>>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      spec_[i][0] = x[i].real();
      spec_[i][1] = x[i].imag();
    }
    fftw_execute(inverse_);
    std::vector<double> out(real_, real_ + n_);
    for (double& v : out) v /= static_cast<double>(n_);
    return out;
  }

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace

std::vector<double> circular_cross_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("correlation inputs must have equal length");
  if (a.empty()) return {};
  RealFft fft(a.size());
  auto fa = fft.forward(a);
  const auto fb = fft.forward(b);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = std::conj(fa[i]) * fb[i];
  return fft.inverse(fa);
}

CorrelationPeak ncc_peak(std::span<const double> reference, std::span<const double> observed) {
  if (reference.size() != observed.size()) throw InvalidInput("correlation inputs must have equal length");
  const std::size_t n = reference.size();
  if (n == 0) return {};
  auto centered = [n](std::span<const double> x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> out(x.begin(), x.end());
    double energy = 0.0;
    for (double& v : out) {
      v -= mean;
      energy += v * v;
    }
    return std::pair{out, std::sqrt(energy)};
  };
  const auto [ref, ref_norm] = centered(reference);
  const auto [obs, obs_norm] = centered(observed);
  if (ref_norm <= 1e-12 || obs_norm <= 1e-12) return {};

  const std::vector<double> c = circular_cross_correlation(ref, obs);
  CorrelationPeak peak;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    if (c[s] > best) {
      best = c[s];
      peak.lag = s;
    }
  }
  peak.ncc = best / (ref_norm * obs_norm);
  return peak;
}

double signed_lag(std::size_t lag, std::size_t n) {
  const auto l = static_cast<double>(lag);
  return lag > n / 2 ? l - static_cast<double>(n) : l;
}

}  // namespace ccdsim
