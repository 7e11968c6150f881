#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ccdsim/coupling.hpp"
#include "ccdsim/image.hpp"

namespace ccdsim {

enum class Architecture { kCcdInterline, kCmos };

/// Bayer pattern named by the colors of its top-left 2x2 tile, row-major.
enum class Cfa { kRGGB, kBGGR, kGRBG, kGBRG };

enum Channel : int { kRed = 0, kGreen = 1, kBlue = 2 };

std::string to_string(Architecture a);
std::string to_string(Cfa c);
Architecture parse_architecture(const std::string& s);
Cfa parse_cfa(const std::string& s);

/// Geometry, timing, gain and noise of one simulated camera.
///
/// The effective window sits inside the total photodiode grid at (border_top,
/// border_left); everything outside it is light-shielded but still read out.
struct SensorConfig {
  std::string name = "dfm-desk";
  Architecture architecture = Architecture::kCcdInterline;
  std::size_t cols_total = 336;
  std::size_t rows_total = 256;
  std::size_t cols_effective = 320;
  std::size_t rows_effective = 240;
  std::size_t border_left = 8;
  std::size_t border_top = 8;
  double frame_rate = 30.0;
  std::optional<double> readout_rate;  // derived from the grid when absent
  double exposure_us = 10'000.0;
  double reference_exposure_us = 10'000.0;
  int gain_index = 0;
  double gain_db_per_step = 1.0;
  int adc_bits = 8;
  double full_well = 10'000.0;
  double dark_current_rate = 0.002;  // charge units per microsecond
  double read_noise_sigma = 15.0;    // charge units, before the amplifier
  double adc_noise_dn = 0.0;         // ADC counts, after the amplifier
  bool shot_noise = false;
  Cfa cfa = Cfa::kRGGB;
  double cmos_coupling_factor = 0.0;
  SusceptibilityProfile susceptibility;

  void validate() const;

  double effective_readout_rate() const;
  /// Readout clock ticks per frame period; equals the pixel count when derived.
  double samples_per_frame() const;
  std::size_t pixel_count() const { return cols_total * rows_total; }
  /// Linear amplification from charge units to ADC counts at the current gain.
  double conversion_gain() const;
  double full_scale() const { return static_cast<double>((1u << adc_bits) - 1u); }
  Channel channel_at(std::size_t row, std::size_t col) const;
  bool is_effective(std::size_t row, std::size_t col) const;
};

/// Photodiode charge over the total grid, before amplification and injection.
struct ChargeFrame {
  Plane<double> charge;
};

/// Digitized samples over the total grid; index k is the k-th sample read out.
struct RawFrame {
  Plane<std::uint16_t> values;
  int adc_bits = 8;

  bool operator==(const RawFrame&) const = default;
};

/// Integrates the scene on every photodiode of its CFA color, plus Poisson dark current.
/// Shielded border photodiodes receive dark current only.
ChargeFrame expose(const Scene& scene, const SensorConfig& config, std::uint64_t seed);

/// Serializes and digitizes every photodiode through the measurement unit:
///   value = clamp(round_half_up(alpha (C_l + C_m + N_read) + N_adc), 0, 2^bits - 1)
/// The interference, when given, must run at the readout rate and cover the frame.
RawFrame readout(const ChargeFrame& charge, const SensorConfig& config,
                 const InducedWaveform* interference, std::uint64_t seed);

/// Bilinear Bayer interpolation, cropped to the effective window.
RgbFrame demosaic(const RawFrame& raw, const SensorConfig& config);

}  // namespace ccdsim
