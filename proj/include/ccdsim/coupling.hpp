#pragma once

#include <cstddef>
#include <vector>

#include "ccdsim/attack.hpp"

namespace ccdsim {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Free-space link between the attacker's antenna and the target.
struct ChannelConfig {
  double tx_power_dbm = 20.1;
  double tx_gain_dbi = 3.0;
  double rx_gain_dbi = 0.0;
  double distance_m = 0.03;
  double carrier_hz = 190e6;

  void validate() const;
  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
};

/// Lorentzian resonance of the sensor's charge pathway.
struct SusceptibilityProfile {
  double resonant_hz = 190e6;
  double bandwidth_hz = 60e6;  // full width at half maximum
  double peak_coupling = 1.0;  // charge units per volt-equivalent
  double floor_coupling = 0.0;

  void validate() const;
};

/// Malicious charge per readout sample, already on the sensor clock.
struct InducedWaveform {
  std::vector<double> samples;  // C_m, charge units, all >= 0
  double sample_rate = 0.0;     // equals the target readout rate
  double offset_samples = 0.0;  // attack start relative to readout sample 0
  double source_rate = 0.0;     // attacker's symbol rate
};

/// Received power in dBm from the Friis free-space equation.
double friis_received_power(const ChannelConfig& channel);

/// Linear field amplitude relative to 1 mW: 10^(P/20).
double volts_equivalent(double power_dbm);

/// floor + (peak - floor) / (1 + (2 (f - f0) / BW)^2)
double coupling_factor(double carrier_hz, const SusceptibilityProfile& profile);

/// Peak induced charge for a full-scale envelope symbol.
double induced_amplitude(const ChannelConfig& channel, const SusceptibilityProfile& profile);

/// Projects the attack envelope onto the readout clock.
///
/// Output sample k corresponds to readout index start_sample + k. The attack symbol seen
/// at readout index m sits at position (m - offset_samples) * symbol_rate / readout_rate
/// and is linearly interpolated. With loop set the envelope repeats forever (continuous
/// transmission); otherwise it is zero outside its own duration.
InducedWaveform induce(const AttackSignal& attack, const ChannelConfig& channel,
                       const SusceptibilityProfile& profile, double readout_rate,
                       double offset_samples, std::size_t duration_samples, bool loop = false,
                       double start_sample = 0.0);

}  // namespace ccdsim
