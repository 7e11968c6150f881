#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "ccdsim/image.hpp"

namespace ccdsim {

/// SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, averaged over
/// all fully contained windows. Frames are compared on luma.
double ssim(const RgbFrame& a, const RgbFrame& b);

/// Five-scale MS-SSIM with dyadic 2x2-mean downsampling. Requires both sides >= 176.
double ms_ssim(const RgbFrame& a, const RgbFrame& b);

/// ||luma(a) - luma(b)||_2 / sqrt(pixel count).
double l2_norm(const RgbFrame& a, const RgbFrame& b);

/// Universal Image Quality Index over 8x8 uniform windows.
double uqi(const RgbFrame& a, const RgbFrame& b);

inline constexpr std::array<double, 5> kMsSsimWeights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

// Luma-level entry points. `peak` is the dynamic range (2^bits - 1).
double ssim_luma(const Plane<double>& a, const Plane<double>& b, double peak);
double ms_ssim_luma(const Plane<double>& a, const Plane<double>& b, double peak);
double l2_norm_luma(const Plane<double>& a, const Plane<double>& b);
double uqi_luma(const Plane<double>& a, const Plane<double>& b);

/// Legitimate (attack off) and malicious (attack on) frames of one measurement point.
struct FrameSet {
  std::vector<RgbFrame> legitimate;
  std::vector<RgbFrame> malicious;
};

using FrameMetric = std::function<double(const RgbFrame&, const RgbFrame&)>;

/// Mean of `metric` over the legitimate x malicious cross product.
double protocol_mean(const FrameMetric& metric, const FrameSet& frames);

/// Mean SSIM over unordered legitimate pairs minus the protocol mean SSIM.
double delta_ssim(const FrameSet& frames);

/// All protocol statistics of one frame set, computed with shared luma planes.
struct ProtocolMetrics {
  double ssim = 0.0;
  double ms_ssim = 0.0;
  double l2 = 0.0;
  double uqi = 0.0;
  double ssim_legitimate = 0.0;
  double delta_ssim = 0.0;
  std::size_t comparisons = 0;
};

/// MS-SSIM is skipped (reported as NaN) when the frames are too small for five scales.
ProtocolMetrics evaluate_protocol(const FrameSet& frames);

}  // namespace ccdsim
