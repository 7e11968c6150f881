#include "ccdsim/capture.hpp"

#include <random>

#include "ccdsim/random.hpp"

namespace ccdsim {

double draw_offset(const SensorConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, {tag(Stream::kOffset)}));
  std::uniform_real_distribution<double> dist(0.0, config.samples_per_frame());
  return dist(rng);
}

InducedWaveform frame_interference(const AttackScenario& attack, const SensorConfig& config,
                                   std::size_t frame_index, double offset_samples) {
  const double start = static_cast<double>(frame_index) * config.samples_per_frame();
  return induce(attack.signal, attack.channel, config.susceptibility,
                config.effective_readout_rate(), offset_samples, config.pixel_count(), attack.loop,
                start);
}

RawFrame capture_raw_frame(const Scene& scene, const SensorConfig& config,
                           const AttackScenario* attack, std::size_t frame_index,
                           double offset_samples, std::uint64_t seed) {
  const auto idx = static_cast<std::uint64_t>(frame_index);
  const ChargeFrame charge = expose(scene, config, derive_seed(seed, {idx, tag(Stream::kExpose)}));
  const std::uint64_t readout_seed = derive_seed(seed, {idx, tag(Stream::kReadout)});
  if (!attack) return readout(charge, config, nullptr, readout_seed);
  const InducedWaveform wave = frame_interference(*attack, config, frame_index, offset_samples);
  return readout(charge, config, &wave, readout_seed);
}

CaptureResult capture_sequence(const Scene& scene, const SensorConfig& config,
                               const AttackScenario* attack, std::size_t n_frames,
                               std::uint64_t seed) {
  if (n_frames < 1) throw InvalidInput("n_frames must be at least 1");
  config.validate();
  CaptureResult out;
  if (attack) {
    out.offset_samples = attack->forced_offset ? *attack->forced_offset : draw_offset(config, seed);
  }
  out.frames.reserve(n_frames);
  out.raw.reserve(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    out.raw.push_back(capture_raw_frame(scene, config, attack, i, out.offset_samples, seed));
    out.frames.push_back(demosaic(out.raw.back(), config));
  }
  return out;
}

}  // namespace ccdsim
