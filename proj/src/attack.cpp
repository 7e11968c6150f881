#include "ccdsim/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ccdsim/image.hpp"

namespace ccdsim {

void SourceImage::validate() const {
  if (width < 1 || height < 1) throw InvalidInput("source image must be at least 1x1");
  if (channels != 3 && channels != 4) throw InvalidInput("source image must be RGB or RGBA");
  if (pixels.size() != width * height * static_cast<std::size_t>(channels)) {
    throw InvalidInput("source image buffer size does not match its dimensions");
  }
}

void AttackSignal::validate() const {
  if (!(symbol_rate > 0.0)) throw InvalidInput("symbol_rate must be positive");
  if (!(carrier_hz > 0.0)) throw InvalidInput("carrier_hz must be positive");
  for (double v : envelope) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("attack envelope must lie within [0,1]");
  }
}

std::vector<double> extract_luminance(const SourceImage& image, std::size_t cols_total,
                                      std::size_t rows_total) {
  image.validate();
  if (image.width > cols_total || image.height > rows_total) {
    throw InvalidInput("source image is larger than the target sensor");
  }
  std::vector<double> out(cols_total * rows_total, 0.0);
  const auto ch = static_cast<std::size_t>(image.channels);
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      const std::uint8_t* p = &image.pixels[(y * image.width + x) * ch];
      double lum = (kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2]) / 255.0;
      if (ch == 4) lum *= p[3] / 255.0;
      out[y * cols_total + x] = std::clamp(lum, 0.0, 1.0);
    }
  }
  return out;
}

double required_sample_rate(double cols_total, double rows_total, double frame_rate) {
  if (!(cols_total > 0 && rows_total > 0 && frame_rate > 0)) {
    throw InvalidInput("sample rate inputs must be positive");
  }
  return cols_total * rows_total * frame_rate;
}

namespace {

// ceil() that ignores representation error on exact ratios.
std::size_t ceil_count(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

std::vector<double> resample(std::span<const double> envelope, double from_rate, double to_rate) {
  if (!(from_rate > 0.0 && to_rate > 0.0)) throw InvalidInput("resample rates must be positive");
  if (envelope.empty()) return {};
  const std::size_t n = envelope.size();
  const std::size_t out_len = ceil_count(static_cast<double>(n) * to_rate / from_rate);
  std::vector<double> out(out_len);
  const double step = from_rate / to_rate;
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * step;
    if (pos >= static_cast<double>(n - 1)) {
      out[i] = envelope[n - 1];
      continue;
    }
    const auto j = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(j);
    out[i] = std::clamp(envelope[j] + frac * (envelope[j + 1] - envelope[j]), 0.0, 1.0);
  }
  return out;
}

std::vector<std::complex<float>> modulate(std::span<const double> envelope, double symbol_rate,
                                          double carrier_hz, double iq_rate, double f_offset) {
  if (!(symbol_rate > 0.0 && iq_rate > 0.0 && carrier_hz > 0.0)) {
    throw InvalidInput("modulation rates must be positive");
  }
  // Baseband occupies symbol_rate/2 around f_offset; Nyquist on the complex stream.
  if (iq_rate + 1e-9 < symbol_rate + 2.0 * std::abs(f_offset)) {
    throw InvalidInput("iq_rate is below twice the signal bandwidth");
  }
  for (double v : envelope) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("attack envelope must lie within [0,1]");
  }
  const std::size_t n = envelope.size();
  const std::size_t len = ceil_count(static_cast<double>(n) * iq_rate / symbol_rate);
  std::vector<std::complex<float>> iq(len);
  const double per_symbol = symbol_rate / iq_rate;
  for (std::size_t i = 0; i < len; ++i) {
    auto k = static_cast<std::size_t>(std::floor(static_cast<double>(i) * per_symbol + 1e-9));
    k = std::min(k, n - 1);
    const double a = envelope[k];
    if (f_offset == 0.0) {
      iq[i] = {static_cast<float>(a), 0.0f};
    } else {
      const double phase = 2.0 * std::numbers::pi * f_offset * static_cast<double>(i) / iq_rate;
      iq[i] = {static_cast<float>(a * std::cos(phase)), static_cast<float>(a * std::sin(phase))};
    }
  }
  return iq;
}

std::vector<double> gaussian_noise_signal(std::size_t n_symbols, std::uint64_t seed, double mean,
                                          double sigma) {
  if (n_symbols < 1) throw InvalidInput("noise signal needs at least one symbol");
  if (sigma < 0.0) throw InvalidInput("sigma must be non-negative");
  std::vector<double> out(n_symbols, std::clamp(mean, 0.0, 1.0));
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, sigma);
  for (double& v : out) v = std::clamp(dist(rng), 0.0, 1.0);
  return out;
}

AttackSignal sine_signal(double tone_hz, double nominal_symbol_rate, double carrier_hz) {
  if (!(tone_hz > 0.0 && nominal_symbol_rate > 0.0)) throw InvalidInput("tone and rate must be positive");
  const auto n = static_cast<std::size_t>(std::max(2.0, std::round(nominal_symbol_rate / tone_hz)));
  AttackSignal sig;
  sig.symbol_rate = tone_hz * static_cast<double>(n);
  sig.carrier_hz = carrier_hz;
  sig.envelope.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    sig.envelope[i] = std::clamp(0.5 + 0.5 * std::sin(phase), 0.0, 1.0);
  }
  return sig;
}

}  // namespace ccdsim
