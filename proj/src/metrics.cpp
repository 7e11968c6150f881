#include "ccdsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccdsim {

namespace {

constexpr std::size_t kGaussSize = 11;
constexpr double kGaussSigma = 1.5;
constexpr std::size_t kUqiSize = 8;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

void require_same_dims(const Plane<double>& a, const Plane<double>& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidInput("frames must have equal dimensions");
  }
}

void require_same_dims(const RgbFrame& a, const RgbFrame& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidInput("frames must have equal dimensions");
  }
}

const std::array<double, kGaussSize>& gauss_kernel() {
  static const auto kernel = [] {
    std::array<double, kGaussSize> k{};
    double sum = 0.0;
    const double mid = (kGaussSize - 1) / 2.0;
    for (std::size_t i = 0; i < kGaussSize; ++i) {
      const double d = static_cast<double>(i) - mid;
      k[i] = std::exp(-d * d / (2.0 * kGaussSigma * kGaussSigma));
      sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
  }();
  return kernel;
}

// Separable "valid" correlation with a symmetric 1-D kernel.
template <std::size_t N>
Plane<double> filter_valid(const Plane<double>& in, const std::array<double, N>& k) {
  const std::size_t w = in.width() - N + 1;
  const std::size_t h = in.height() - N + 1;
  Plane<double> tmp(w, in.height());
  for (std::size_t r = 0; r < in.height(); ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) s += k[i] * in.at(r, c + i);
      tmp.at(r, c) = s;
    }
  }
  Plane<double> out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) s += k[i] * tmp.at(r + i, c);
      out.at(r, c) = s;
    }
  }
  return out;
}

Plane<double> product(const Plane<double>& a, const Plane<double>& b) {
  Plane<double> out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

struct SsimTerms {
  double luminance_cs = 0.0;  // mean of full SSIM map
  double cs = 0.0;            // mean contrast-structure term
  double l = 0.0;             // mean luminance term
};

SsimTerms ssim_terms(const Plane<double>& a, const Plane<double>& b, double peak) {
  require_same_dims(a, b);
  if (a.width() < kGaussSize || a.height() < kGaussSize) {
    throw InvalidInput("frames must be at least 11x11 for SSIM");
  }
  const double c1 = (kK1 * peak) * (kK1 * peak);
  const double c2 = (kK2 * peak) * (kK2 * peak);
  const auto& k = gauss_kernel();
  const Plane<double> mu_a = filter_valid(a, k);
  const Plane<double> mu_b = filter_valid(b, k);
  const Plane<double> aa = filter_valid(product(a, a), k);
  const Plane<double> bb = filter_valid(product(b, b), k);
  const Plane<double> ab = filter_valid(product(a, b), k);

  SsimTerms t;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = aa[i] - ma * ma;
    const double vb = bb[i] - mb * mb;
    const double cov = ab[i] - ma * mb;
    const double l = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    const double cs = (2.0 * cov + c2) / (va + vb + c2);
    t.l += l;
    t.cs += cs;
    t.luminance_cs += l * cs;
  }
  const auto n = static_cast<double>(mu_a.size());
  t.l /= n;
  t.cs /= n;
  t.luminance_cs /= n;
  return t;
}

Plane<double> downsample2(const Plane<double>& in) {
  Plane<double> out(in.width() / 2, in.height() / 2);
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) {
      out.at(r, c) = 0.25 * (in.at(2 * r, 2 * c) + in.at(2 * r, 2 * c + 1) +
                             in.at(2 * r + 1, 2 * c) + in.at(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

constexpr std::size_t kMsSsimMinSide = kGaussSize << (kMsSsimWeights.size() - 1);

}  // namespace

double ssim_luma(const Plane<double>& a, const Plane<double>& b, double peak) {
  return ssim_terms(a, b, peak).luminance_cs;
}

double ms_ssim_luma(const Plane<double>& a, const Plane<double>& b, double peak) {
  require_same_dims(a, b);
  if (a.width() < kMsSsimMinSide || a.height() < kMsSsimMinSide) {
    throw InvalidInput("frames must be at least 176x176 for five-scale MS-SSIM");
  }
  Plane<double> x = a;
  Plane<double> y = b;
  double result = 1.0;
  for (std::size_t s = 0; s < kMsSsimWeights.size(); ++s) {
    const SsimTerms t = ssim_terms(x, y, peak);
    // Negative contrast-structure terms would make the fractional power undefined.
    result *= std::pow(std::max(t.cs, 0.0), kMsSsimWeights[s]);
    if (s + 1 == kMsSsimWeights.size()) {
      result *= std::pow(std::max(t.l, 0.0), kMsSsimWeights[s]);
    } else {
      x = downsample2(x);
      y = downsample2(y);
    }
  }
  return result;
}

double l2_norm_luma(const Plane<double>& a, const Plane<double>& b) {
  require_same_dims(a, b);
  if (a.empty()) throw InvalidInput("frames must not be empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum) / std::sqrt(static_cast<double>(a.size()));
}

double uqi_luma(const Plane<double>& a, const Plane<double>& b) {
  require_same_dims(a, b);
  if (a.width() < kUqiSize || a.height() < kUqiSize) {
    throw InvalidInput("frames must be at least 8x8 for UQI");
  }
  std::array<double, kUqiSize> box{};
  box.fill(1.0 / kUqiSize);
  const Plane<double> mu_a = filter_valid(a, box);
  const Plane<double> mu_b = filter_valid(b, box);
  const Plane<double> aa = filter_valid(product(a, a), box);
  const Plane<double> bb = filter_valid(product(b, b), box);
  const Plane<double> ab = filter_valid(product(a, b), box);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double mean_sq = ma * ma + mb * mb;
    const double tol = 1e-10 * (1.0 + mean_sq);
    double va = aa[i] - ma * ma;
    double vb = bb[i] - mb * mb;
    double cov = ab[i] - ma * mb;
    if (std::abs(va) <= tol) va = 0.0;
    if (std::abs(vb) <= tol) vb = 0.0;
    if (std::abs(cov) <= tol) cov = 0.0;
    const double var_sum = va + vb;
    double q;
    if (var_sum == 0.0) {
      const bool equal_means = std::abs(ma - mb) <= 1e-9 * (1.0 + std::abs(ma) + std::abs(mb));
      q = equal_means ? 1.0 : 2.0 * ma * mb / mean_sq;
    } else if (mean_sq == 0.0) {
      q = 2.0 * cov / var_sum;
    } else {
      q = 4.0 * cov * ma * mb / (var_sum * mean_sq);
    }
    total += q;
  }
  return total / static_cast<double>(mu_a.size());
}

double ssim(const RgbFrame& a, const RgbFrame& b) {
  require_same_dims(a, b);
  return ssim_luma(luma(a), luma(b), a.max_value());
}

double ms_ssim(const RgbFrame& a, const RgbFrame& b) {
  require_same_dims(a, b);
  return ms_ssim_luma(luma(a), luma(b), a.max_value());
}

double l2_norm(const RgbFrame& a, const RgbFrame& b) {
  require_same_dims(a, b);
  return l2_norm_luma(luma(a), luma(b));
}

double uqi(const RgbFrame& a, const RgbFrame& b) {
  require_same_dims(a, b);
  return uqi_luma(luma(a), luma(b));
}

double protocol_mean(const FrameMetric& metric, const FrameSet& frames) {
  if (frames.legitimate.empty() || frames.malicious.empty()) {
    throw InvalidInput("protocol needs at least one legitimate and one malicious frame");
  }
  double sum = 0.0;
  for (const auto& mal : frames.malicious) {
    for (const auto& leg : frames.legitimate) sum += metric(leg, mal);
  }
  return sum / static_cast<double>(frames.legitimate.size() * frames.malicious.size());
}

namespace {

double legitimate_pair_mean(const std::vector<Plane<double>>& legit, double peak) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < legit.size(); ++i) {
    for (std::size_t j = i + 1; j < legit.size(); ++j) {
      sum += ssim_luma(legit[i], legit[j], peak);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace

double delta_ssim(const FrameSet& frames) {
  if (frames.legitimate.size() < 2) throw InvalidInput("delta SSIM needs at least two legitimate frames");
  std::vector<Plane<double>> legit;
  for (const auto& f : frames.legitimate) legit.push_back(luma(f));
  const double legit_mean = legitimate_pair_mean(legit, frames.legitimate.front().max_value());
  return legit_mean - protocol_mean([](const RgbFrame& a, const RgbFrame& b) { return ssim(a, b); },
                                    frames);
}

ProtocolMetrics evaluate_protocol(const FrameSet& frames) {
  if (frames.legitimate.size() < 2 || frames.malicious.empty()) {
    throw InvalidInput("protocol needs >= 2 legitimate frames and >= 1 malicious frame");
  }
  const double peak = frames.legitimate.front().max_value();
  std::vector<Plane<double>> legit;
  std::vector<Plane<double>> mal;
  for (const auto& f : frames.legitimate) legit.push_back(luma(f));
  for (const auto& f : frames.malicious) mal.push_back(luma(f));
  for (const auto& m : mal) require_same_dims(legit.front(), m);
  for (const auto& l : legit) require_same_dims(legit.front(), l);

  const bool multiscale =
      legit.front().width() >= kMsSsimMinSide && legit.front().height() >= kMsSsimMinSide;
  ProtocolMetrics out;
  for (const auto& m : mal) {
    for (const auto& l : legit) {
      out.ssim += ssim_luma(l, m, peak);
      if (multiscale) out.ms_ssim += ms_ssim_luma(l, m, peak);
      out.l2 += l2_norm_luma(l, m);
      out.uqi += uqi_luma(l, m);
      ++out.comparisons;
    }
  }
  const auto n = static_cast<double>(out.comparisons);
  out.ssim /= n;
  out.ms_ssim = multiscale ? out.ms_ssim / n : std::numeric_limits<double>::quiet_NaN();
  out.l2 /= n;
  out.uqi /= n;
  out.ssim_legitimate = legitimate_pair_mean(legit, peak);
  out.delta_ssim = out.ssim_legitimate - out.ssim;
  return out;
}

}  // namespace ccdsim
