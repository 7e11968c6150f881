#include "ccdsim/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ccdsim/attack.hpp"

namespace ccdsim {

std::string to_string(Architecture a) {
  return a == Architecture::kCmos ? "cmos" : "ccd_interline";
}

std::string to_string(Cfa c) {
  switch (c) {
    case Cfa::kRGGB: return "RGGB";
    case Cfa::kBGGR: return "BGGR";
    case Cfa::kGRBG: return "GRBG";
    case Cfa::kGBRG: return "GBRG";
  }
  return "RGGB";
}

Architecture parse_architecture(const std::string& s) {
  if (s == "ccd_interline" || s == "ccd") return Architecture::kCcdInterline;
  if (s == "cmos") return Architecture::kCmos;
  throw InvalidInput("unknown architecture: " + s);
}

Cfa parse_cfa(const std::string& s) {
  if (s == "RGGB") return Cfa::kRGGB;
  if (s == "BGGR") return Cfa::kBGGR;
  if (s == "GRBG") return Cfa::kGRBG;
  if (s == "GBRG") return Cfa::kGBRG;
  throw InvalidInput("unknown CFA pattern: " + s);
}

void SensorConfig::validate() const {
  if (cols_total == 0 || rows_total == 0) throw InvalidInput("sensor must have at least one pixel");
  if (cols_effective == 0 || rows_effective == 0) throw InvalidInput("effective window is empty");
  if (cols_effective + border_left > cols_total || rows_effective + border_top > rows_total) {
    throw InvalidInput("effective window does not fit inside the total grid");
  }
  if (!(frame_rate > 0.0)) throw InvalidInput("frame_rate must be positive");
  if (readout_rate && !(*readout_rate > 0.0)) throw InvalidInput("readout_rate must be positive");
  if (!(exposure_us > 0.0)) throw InvalidInput("exposure_time must be positive");
  if (!(reference_exposure_us > 0.0)) throw InvalidInput("reference exposure must be positive");
  if (gain_index < 0 || gain_index > 29) throw InvalidInput("gain_index must be within [0,29]");
  if (adc_bits < 1 || adc_bits > 16) throw InvalidInput("adc_bits must be within [1,16]");
  if (!(full_well > 0.0)) throw InvalidInput("full_well must be positive");
  if (dark_current_rate < 0.0 || read_noise_sigma < 0.0 || adc_noise_dn < 0.0) {
    throw InvalidInput("noise parameters must be non-negative");
  }
  if (cmos_coupling_factor < 0.0) throw InvalidInput("cmos_coupling_factor must be non-negative");
  susceptibility.validate();
}

double SensorConfig::effective_readout_rate() const {
  if (readout_rate) return *readout_rate;
  return required_sample_rate(static_cast<double>(cols_total), static_cast<double>(rows_total),
                              frame_rate);
}

double SensorConfig::samples_per_frame() const { return effective_readout_rate() / frame_rate; }

double SensorConfig::conversion_gain() const {
  return full_scale() / full_well * std::pow(10.0, gain_index * gain_db_per_step / 20.0);
}

Channel SensorConfig::channel_at(std::size_t row, std::size_t col) const {
  const bool odd_row = row & 1u;
  const bool odd_col = col & 1u;
  // Position within the 2x2 tile: 0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right.
  const int pos = (odd_row ? 2 : 0) + (odd_col ? 1 : 0);
  static constexpr Channel kTiles[4][4] = {
      {kRed, kGreen, kGreen, kBlue},   // RGGB
      {kBlue, kGreen, kGreen, kRed},   // BGGR
      {kGreen, kRed, kBlue, kGreen},   // GRBG
      {kGreen, kBlue, kRed, kGreen},   // GBRG
  };
  return kTiles[static_cast<int>(cfa)][pos];
}

bool SensorConfig::is_effective(std::size_t row, std::size_t col) const {
  return row >= border_top && row < border_top + rows_effective && col >= border_left &&
         col < border_left + cols_effective;
}

ChargeFrame expose(const Scene& scene, const SensorConfig& config, std::uint64_t seed) {
  config.validate();
  if (scene.width() != config.cols_effective || scene.height() != config.rows_effective) {
    throw InvalidInput("scene dimensions must match the effective resolution");
  }
  scene.validate();

  ChargeFrame out{Plane<double>(config.cols_total, config.rows_total, 0.0)};
  std::mt19937_64 rng(seed);
  const double dark_mean = config.dark_current_rate * config.exposure_us;
  std::poisson_distribution<long> dark(dark_mean > 0.0 ? dark_mean : 1.0);
  const double scale = config.full_well * config.exposure_us / config.reference_exposure_us;

  for (std::size_t r = 0; r < config.rows_total; ++r) {
    for (std::size_t c = 0; c < config.cols_total; ++c) {
      double q = 0.0;
      if (config.is_effective(r, c)) {
        const double mean =
            scale * scene.at(r - config.border_top, c - config.border_left, config.channel_at(r, c));
        if (config.shot_noise && mean > 0.0) {
          q = static_cast<double>(std::poisson_distribution<long>(mean)(rng));
        } else {
          q = mean;
        }
      }
      if (dark_mean > 0.0) q += static_cast<double>(dark(rng));
      out.charge.at(r, c) = q;
    }
  }
  return out;
}

RawFrame readout(const ChargeFrame& charge, const SensorConfig& config,
                 const InducedWaveform* interference, std::uint64_t seed) {
  config.validate();
  if (charge.charge.width() != config.cols_total || charge.charge.height() != config.rows_total) {
    throw InvalidInput("charge frame dimensions must match the total resolution");
  }
  const std::size_t n = config.pixel_count();
  if (interference) {
    const double rate = config.effective_readout_rate();
    if (std::abs(interference->sample_rate - rate) > 1e-9 * rate) {
      throw InvalidInput("interference sample rate does not match the readout rate");
    }
    if (interference->samples.size() < n) {
      throw InvalidInput("interference waveform is shorter than one frame");
    }
  }

  RawFrame out{Plane<std::uint16_t>(config.cols_total, config.rows_total, 0), config.adc_bits};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> read_noise(0.0, 1.0);
  const double full = config.full_scale();
  // Scale before dividing by the well so that exact fractions of it land on exact counts.
  const double amp = full * std::pow(10.0, config.gain_index * config.gain_db_per_step / 20.0);
  const double injection_scale =
      config.architecture == Architecture::kCmos ? config.cmos_coupling_factor : 1.0;

  // Row-major from (0,0): sample k of the frame is photodiode k.
  for (std::size_t k = 0; k < n; ++k) {
    double q = charge.charge[k];
    if (interference) q += injection_scale * interference->samples[k];
    if (config.read_noise_sigma > 0.0) q += config.read_noise_sigma * read_noise(rng);
    double v = amp * q / config.full_well;
    if (config.adc_noise_dn > 0.0) v += config.adc_noise_dn * read_noise(rng);
    v = std::floor(v + 0.5);
    out.values[k] = static_cast<std::uint16_t>(std::clamp(v, 0.0, full));
  }
  return out;
}

RgbFrame demosaic(const RawFrame& raw, const SensorConfig& config) {
  config.validate();
  const std::size_t w = config.cols_total;
  const std::size_t h = config.rows_total;
  if (raw.values.width() != w || raw.values.height() != h) {
    throw InvalidInput("raw frame dimensions must match the total resolution");
  }
  // Reflect-101 at the grid edge keeps the Bayer parity of mirrored neighbours.
  auto reflect = [](long i, std::size_t n) -> std::size_t {
    if (n == 1) return 0;
    if (i < 0) i = -i;
    if (i >= static_cast<long>(n)) i = 2 * static_cast<long>(n) - 2 - i;
    return static_cast<std::size_t>(i);
  };
  auto sample = [&](long r, long c) -> double {
    return raw.values.at(reflect(r, h), reflect(c, w));
  };

  RgbFrame out(config.cols_effective, config.rows_effective, raw.adc_bits);
  const double full = static_cast<double>(out.max_value());
  for (std::size_t er = 0; er < config.rows_effective; ++er) {
    for (std::size_t ec = 0; ec < config.cols_effective; ++ec) {
      const long r = static_cast<long>(er + config.border_top);
      const long c = static_cast<long>(ec + config.border_left);
      const Channel own = config.channel_at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      double rgb[3];
      for (int ch = 0; ch < 3; ++ch) {
        if (ch == own) {
          rgb[ch] = sample(r, c);
          continue;
        }
        double sum = 0.0;
        int count = 0;
        for (long dr = -1; dr <= 1; ++dr) {
          for (long dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const std::size_t nr = reflect(r + dr, h);
            const std::size_t nc = reflect(c + dc, w);
            // Parity is preserved by reflection, so the neighbour's color is its raw position's.
            if (config.channel_at(static_cast<std::size_t>(r + dr + 2 * static_cast<long>(h)),
                                  static_cast<std::size_t>(c + dc + 2 * static_cast<long>(w))) == ch) {
              sum += raw.values.at(nr, nc);
              ++count;
            }
          }
        }
        rgb[ch] = count > 0 ? sum / count : 0.0;
      }
      for (int ch = 0; ch < 3; ++ch) {
        out.at(er, ec, ch) = static_cast<std::uint16_t>(std::clamp(std::floor(rgb[ch] + 0.5), 0.0, full));
      }
    }
  }
  return out;
}

}  // namespace ccdsim
