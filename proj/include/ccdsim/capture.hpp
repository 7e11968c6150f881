#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccdsim/coupling.hpp"
#include "ccdsim/sensor.hpp"

namespace ccdsim {

/// What the attacker transmits and from where.
struct AttackScenario {
  AttackSignal signal;
  ChannelConfig channel;
  bool loop = true;                     // transmit the envelope continuously
  std::optional<double> forced_offset;  // debug only: pin the clock offset (readout samples)
};

struct CaptureResult {
  std::vector<RgbFrame> frames;
  std::vector<RawFrame> raw;
  double offset_samples = 0.0;  // attack clock offset used for the sequence
};

/// Clock offset between attack and readout, uniform over one frame period.
double draw_offset(const SensorConfig& config, std::uint64_t seed);

/// Induced charge for frame `frame_index` of a continuous readout, which starts at
/// readout index frame_index * samples_per_frame.
InducedWaveform frame_interference(const AttackScenario& attack, const SensorConfig& config,
                                   std::size_t frame_index, double offset_samples);

/// One frame of a continuous capture. Sensor noise depends only on (seed, frame_index),
/// so attacked and unattacked captures with equal seeds share their noise.
RawFrame capture_raw_frame(const Scene& scene, const SensorConfig& config,
                           const AttackScenario* attack, std::size_t frame_index,
                           double offset_samples, std::uint64_t seed);

/// Captures n_frames consecutive frames while the attack (if any) runs on its own clock.
CaptureResult capture_sequence(const Scene& scene, const SensorConfig& config,
                               const AttackScenario* attack, std::size_t n_frames,
                               std::uint64_t seed);

}  // namespace ccdsim
