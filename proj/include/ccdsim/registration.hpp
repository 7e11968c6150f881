#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ccdsim {

/// c[s] = sum_k a[k] * b[(k + s) mod n]. Both inputs must have the same length.
std::vector<double> circular_cross_correlation(std::span<const double> a, std::span<const double> b);

struct CorrelationPeak {
  std::size_t lag = 0;  // observed[k] ~ reference[k - lag]
  double ncc = 0.0;     // zero-mean normalized correlation at that lag
};

/// Lag of maximum normalized cross-correlation. A constant input yields ncc = 0.
CorrelationPeak ncc_peak(std::span<const double> reference, std::span<const double> observed);

/// Maps a circular lag in [0, n) to the signed range (-n/2, n/2].
double signed_lag(std::size_t lag, std::size_t n);

}  // namespace ccdsim
