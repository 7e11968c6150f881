#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ccdsim {

/// 8-bit RGB (3 channels) or RGBA (4 channels) image, row-major, interleaved.
struct SourceImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  void validate() const;
};

/// Amplitude envelope with one symbol per targeted pixel, in readout order.
struct AttackSignal {
  std::vector<double> envelope;  // each in [0,1]
  double symbol_rate = 1.0;      // symbols per second
  double carrier_hz = 190e6;

  void validate() const;
};

/// Luminance of every pixel in the sensor's serialized readout order, padded with
/// zeros up to the full photodiode grid. Alpha scales the amplitude linearly.
std::vector<double> extract_luminance(const SourceImage& image, std::size_t cols_total,
                                      std::size_t rows_total);

/// Readout rate implied by the full photodiode grid and the frame rate.
double required_sample_rate(double cols_total, double rows_total, double frame_rate);

/// Linear-interpolation rate conversion. Output has ceil(n * to / from) samples and
/// positions past the last input sample hold the last value.
std::vector<double> resample(std::span<const double> envelope, double from_rate, double to_rate);

/// Complex baseband AM: envelope held for iq_rate/symbol_rate samples per symbol, then
/// rotated by f_offset. The carrier itself is applied by the radio front end.
std::vector<std::complex<float>> modulate(std::span<const double> envelope, double symbol_rate,
                                          double carrier_hz, double iq_rate,
                                          double f_offset = 0.0);

/// Seeded i.i.d. Gaussian envelope clamped to [0,1].
std::vector<double> gaussian_noise_signal(std::size_t n_symbols, std::uint64_t seed,
                                          double mean = 0.5, double sigma = 0.25);

/// One period of a raised sine tone (0.5 + 0.5 sin). The symbol rate is adjusted so the
/// period holds an integer number of symbols, giving an exact tone when looped.
AttackSignal sine_signal(double tone_hz, double nominal_symbol_rate, double carrier_hz);

}  // namespace ccdsim
