#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccdsim/attack.hpp"
#include "ccdsim/barcode.hpp"
#include "ccdsim/capture.hpp"
#include "ccdsim/coupling.hpp"
#include "ccdsim/metrics.hpp"
#include "ccdsim/sensor.hpp"

namespace ccdsim {

// ---------------------------------------------------------------------------------------
// Scenes and default calibration
// ---------------------------------------------------------------------------------------

enum class SceneKind { kDark, kGray, kChart };

std::string to_string(SceneKind k);
SceneKind parse_scene_kind(const std::string& s);

/// Procedural test chart: a soft gradient with colored patches, values in [0.1, 0.8].
Scene make_chart_scene(std::size_t width, std::size_t height);
Scene make_scene(SceneKind kind, std::size_t width, std::size_t height, double level = 0.2);

/// Bumped whenever a default below changes the simulator's calibrated output.
inline constexpr int kCalibrationVersion = 1;

/// Desk-scale stand-in for the industrial GigE colour camera (wide resonance at 190 MHz).
SensorConfig default_sensor();
/// Analog CCTV board camera: narrow resonance at 341 MHz.
SensorConfig analog_cctv_sensor();
/// Full-size geometry of the industrial camera with its datasheet readout rate.
SensorConfig dfm_datasheet_sensor();
/// Attacker at 3 cm with 20.1 dBm through a 3 dBi monopole at 190 MHz.
ChannelConfig default_channel();

// ---------------------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------------------

enum class SweepAxis { kFrequency, kPower, kDistance, kGain, kExposure };
enum class SignalSource { kSine, kGaussianNoise };

std::string to_string(SweepAxis a);
SweepAxis parse_sweep_axis(const std::string& s);
std::string to_string(SignalSource s);
SignalSource parse_signal_source(const std::string& s);

struct ExperimentPlan {
  std::string name = "sweep";
  SensorConfig sensor;
  ChannelConfig channel;
  SweepAxis axis = SweepAxis::kFrequency;
  double start = 50e6;
  double stop = 500e6;
  double step = 5e6;
  std::vector<double> values;  // explicit axis values; overrides start/stop/step when set
  std::vector<int> gains;  // each sweep point repeats per gain; empty uses sensor.gain_index
  std::size_t legitimate_frames = 3;
  std::size_t malicious_frames = 7;
  SignalSource source = SignalSource::kSine;
  double tone_hz = 1000.0;
  double amplitude_scale = 1.0;  // envelope multiplier; 0 disables the attack's effect
  SceneKind scene = SceneKind::kChart;
  double scene_level = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<double> axis_values() const;
  std::vector<int> gain_values() const;
};

struct SweepResult {
  double swept_value = 0.0;
  int gain_index = 0;
  double rx_power_dbm = 0.0;
  double coupling = 0.0;
  ProtocolMetrics metrics;
};

using RowCallback = std::function<void(const SweepResult&)>;

/// Applies one axis value to copies of the sensor and channel configuration.
void apply_axis(SweepAxis axis, double value, SensorConfig& sensor, ChannelConfig& channel);

/// Builds the attack for a plan point (signal source, scaled envelope, channel).
AttackScenario build_attack(const ExperimentPlan& plan, const SensorConfig& sensor,
                            const ChannelConfig& channel);

/// Runs one sweep point: legitimate and malicious captures plus protocol metrics.
SweepResult run_sweep_point(const ExperimentPlan& plan, double value, int gain);

/// Runs every (gain, value) point, possibly concurrently. `on_row` sees rows in completion
/// order; the returned rows are ordered by gain, then axis value.
std::vector<SweepResult> run_sweep(const ExperimentPlan& plan, const RowCallback& on_row = {});

std::vector<SweepResult> frequency_sweep(const ExperimentPlan& plan, const RowCallback& on_row = {});
std::vector<SweepResult> power_sweep(const ExperimentPlan& plan, const RowCallback& on_row = {});
std::vector<SweepResult> distance_sweep(const ExperimentPlan& plan, const RowCallback& on_row = {});

ExperimentPlan default_frequency_plan();
ExperimentPlan default_power_plan();
/// Dark frames with a raised noise floor so that gain 29 saturates many pixels.
ExperimentPlan high_noise_floor_power_plan();
ExperimentPlan default_distance_plan();

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepResult& row);
std::string sweep_csv_footer(std::size_t rows);

// ---------------------------------------------------------------------------------------
// Fine-grained pattern injection and drift registration
// ---------------------------------------------------------------------------------------

struct InjectionPlan {
  SensorConfig sensor;
  ChannelConfig channel;
  std::size_t frames = 3;
  bool noise_free = true;
  std::optional<double> forced_offset;  // readout samples
  double rate_mismatch = 0.0;           // attack rate = readout rate * (1 + rate_mismatch)
  SceneKind scene = SceneKind::kGray;
  double scene_level = 0.005;
  std::uint64_t seed = 1;
};

struct FrameRegistration {
  std::size_t lag = 0;  // serialized readout position of the pattern origin
  std::size_t x_hat = 0;
  std::size_t y_hat = 0;
  double ncc = 0.0;
};

struct InjectionReport {
  std::vector<RgbFrame> attacked;
  std::vector<RgbFrame> clean;
  std::vector<RawFrame> attacked_raw;
  std::vector<RawFrame> clean_raw;
  double offset_samples = 0.0;
  std::vector<double> envelope;  // injected pattern, one symbol per photodiode
  std::vector<FrameRegistration> registration;
  /// Measured advance of the pattern toward earlier readout samples between frames n, n+1.
  std::vector<double> drift_advance;
  /// samples_per_frame * (1 - readout_rate / attack_rate)
  double predicted_drift_advance = 0.0;
};

/// Default glyph: a ring, a cross and block letters on black, sized to the sensor.
SourceImage make_glyph_image(std::size_t width, std::size_t height);

/// Rate-matched (or deliberately mismatched) injection of an image envelope. Without an
/// image, a seeded Gaussian-noise envelope of one frame is injected.
InjectionReport pattern_injection(const SourceImage* image, const InjectionPlan& plan);

InjectionPlan default_injection_plan();

// ---------------------------------------------------------------------------------------
// Barcode scanning campaign
// ---------------------------------------------------------------------------------------

struct BarcodePlan {
  SensorConfig sensor;
  ChannelConfig channel;
  std::vector<double> exposures_us = {20'000, 26'000, 33'000};
  std::vector<int> gains = {0, 3, 6, 9};
  std::size_t frames_per_condition = 200;
  double illumination = 1.0;  // scene radiance multiplier
  std::vector<std::string> payloads = {"590123412345", "400638133393"};
  std::size_t module_px = 2;
  double noise_mean = 0.5;
  double noise_sigma = 0.25;
  DecoderOptions decoder;
  std::uint64_t seed = 1;

  void validate() const;
};

struct BarcodeFrameRecord {
  std::size_t condition = 0;
  double exposure_us = 0.0;
  int gain_index = 0;
  std::size_t frame_index = 0;
  bool attack_on = false;
  std::vector<std::string> decoded;
};

struct BarcodeCondition {
  double exposure_us = 0.0;
  int gain_index = 0;
  std::size_t frames = 0;
  std::size_t clean_detected = 0;
  std::size_t attack_detected = 0;
  std::vector<std::size_t> clean_per_code;
  std::vector<std::size_t> attack_per_code;

  double clean_rate() const { return frames ? double(clean_detected) / double(frames) : 0.0; }
  double attack_rate() const { return frames ? double(attack_detected) / double(frames) : 0.0; }
};

struct BarcodeCampaign {
  std::vector<BarcodeCondition> conditions;
  std::vector<BarcodeFrameRecord> frames;
};

/// The barcode scene: two EAN-13 symbols stacked on a light background.
Scene make_barcode_scene(const BarcodePlan& plan);

/// Detects a frame when at least one barcode decodes; also counts each payload.
BarcodeCampaign barcode_campaign(const BarcodePlan& plan);

/// Evaluates one (exposure, gain) point, optionally overriding the transmit power.
BarcodeCondition barcode_condition(const BarcodePlan& plan, double exposure_us, int gain,
                                   std::optional<double> tx_power_dbm = std::nullopt,
                                   std::vector<BarcodeFrameRecord>* records = nullptr,
                                   std::size_t condition_index = 0);

BarcodePlan default_barcode_plan();

std::string barcode_csv_header();
std::string barcode_csv_row(const BarcodeCondition& c);
std::string barcode_frames_csv_header();
std::string barcode_frames_csv_row(const BarcodeFrameRecord& r);

// ---------------------------------------------------------------------------------------
// Exposure-drop injection detector
// ---------------------------------------------------------------------------------------

struct DetectorPlan {
  SensorConfig sensor;
  ChannelConfig channel;
  std::size_t stream_frames = 2000;
  double probe_probability = 0.1;
  double min_exposure_us = 10.0;
  double threshold_dn = 2.0;
  double ambient = 1.0;  // scene brightness factor; divides the reference exposure
  SceneKind scene = SceneKind::kChart;
  double scene_level = 0.2;
  SignalSource source = SignalSource::kSine;
  double tone_hz = 1000.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct DetectorReport {
  std::vector<std::size_t> probe_frames;
  std::vector<double> probe_luma_attack_off;
  std::vector<double> probe_luma_attack_on;
  std::vector<bool> flags_attack_off;
  std::vector<bool> flags_attack_on;
  double false_positive_rate = 0.0;
  double true_positive_rate = 0.0;
};

/// Unpredictable probe schedule: each frame is a probe with the plan's probability.
std::vector<std::size_t> probe_schedule(const DetectorPlan& plan);

/// Runs the stream twice (attack off, attack on). On probe frames the exposure drops to
/// its minimum and the frame is flagged when its mean luma exceeds the threshold.
DetectorReport exposure_drop_detector(const DetectorPlan& plan);

DetectorPlan default_detector_plan();

std::string detector_csv(const DetectorPlan& plan, const DetectorReport& report);

// ---------------------------------------------------------------------------------------

/// Worker count: CCDSIM_THREADS if set, else the hardware concurrency.
std::size_t worker_count();

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ccdsim
