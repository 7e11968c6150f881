#include "ccdsim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ccdsim/image.hpp"

namespace ccdsim {

void ChannelConfig::validate() const {
  if (!(distance_m > 0.0)) throw InvalidInput("distance_m must be positive");
  if (!(carrier_hz > 0.0)) throw InvalidInput("carrier_hz must be positive");
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(tx_gain_dbi) || !std::isfinite(rx_gain_dbi)) {
    throw InvalidInput("channel powers and gains must be finite");
  }
}

void SusceptibilityProfile::validate() const {
  if (!(bandwidth_hz > 0.0)) throw InvalidInput("bandwidth_hz must be positive");
  if (!(floor_coupling >= 0.0)) throw InvalidInput("floor_coupling must be non-negative");
  if (!(peak_coupling >= floor_coupling)) throw InvalidInput("peak_coupling must be >= floor_coupling");
}

double friis_received_power(const ChannelConfig& channel) {
  channel.validate();
  const double ratio = channel.wavelength_m() / (4.0 * std::numbers::pi * channel.distance_m);
  return channel.tx_power_dbm + channel.tx_gain_dbi + channel.rx_gain_dbi + 20.0 * std::log10(ratio);
}

double volts_equivalent(double power_dbm) { return std::pow(10.0, power_dbm / 20.0); }

double coupling_factor(double carrier_hz, const SusceptibilityProfile& profile) {
  profile.validate();
  const double x = 2.0 * (carrier_hz - profile.resonant_hz) / profile.bandwidth_hz;
  return profile.floor_coupling + (profile.peak_coupling - profile.floor_coupling) / (1.0 + x * x);
}

double induced_amplitude(const ChannelConfig& channel, const SusceptibilityProfile& profile) {
  return coupling_factor(channel.carrier_hz, profile) *
         volts_equivalent(friis_received_power(channel));
}

InducedWaveform induce(const AttackSignal& attack, const ChannelConfig& channel,
                       const SusceptibilityProfile& profile, double readout_rate,
                       double offset_samples, std::size_t duration_samples, bool loop,
                       double start_sample) {
  attack.validate();
  if (duration_samples == 0) throw InvalidInput("induced waveform duration must be positive");
  if (!(readout_rate > 0.0)) throw InvalidInput("readout_rate must be positive");
  if (!std::isfinite(offset_samples) || !std::isfinite(start_sample)) {
    throw InvalidInput("offsets must be finite");
  }

  InducedWaveform out;
  out.sample_rate = readout_rate;
  out.offset_samples = offset_samples;
  out.source_rate = attack.symbol_rate;
  out.samples.assign(duration_samples, 0.0);

  const auto& env = attack.envelope;
  const std::size_t n = env.size();
  if (n == 0) return out;
  const double amplitude = induced_amplitude(channel, profile);
  if (amplitude == 0.0) return out;

  const double ratio = attack.symbol_rate / readout_rate;
  const double len = static_cast<double>(n);
  for (std::size_t k = 0; k < duration_samples; ++k) {
    double pos = (start_sample + static_cast<double>(k) - offset_samples) * ratio;
    double value;
    if (loop) {
      pos = std::fmod(pos, len);
      if (pos < 0.0) pos += len;
      auto j = static_cast<std::size_t>(pos);
      if (j >= n) j = n - 1;  // fmod rounding at the wrap point
      const double frac = pos - static_cast<double>(j);
      const double next = env[(j + 1) % n];
      value = env[j] + frac * (next - env[j]);
    } else {
      if (pos < 0.0 || pos >= len) continue;
      const auto j = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(j);
      const double next = j + 1 < n ? env[j + 1] : env[j];
      value = env[j] + frac * (next - env[j]);
    }
    out.samples[k] = amplitude * std::max(0.0, value);
  }
  return out;
}

}  // namespace ccdsim
