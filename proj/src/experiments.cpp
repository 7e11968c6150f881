#include "ccdsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "ccdsim/random.hpp"
#include "ccdsim/registration.hpp"

namespace ccdsim {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Runs job(i) for i in [0, n) on the worker pool.
template <typename Job>
void parallel_for(std::size_t n, Job&& job) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double mean_luma(const RgbFrame& frame) {
  const Plane<double> y = luma(frame);
  return std::accumulate(y.values().begin(), y.values().end(), 0.0) / static_cast<double>(y.size());
}

}  // namespace

std::size_t worker_count() {
  if (const char* env = std::getenv("CCDSIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("spearman needs two equal series of length >= 2");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------------------
// Scenes and defaults
// ---------------------------------------------------------------------------------------

std::string to_string(SceneKind k) {
  switch (k) {
    case SceneKind::kDark: return "dark";
    case SceneKind::kGray: return "gray";
    case SceneKind::kChart: return "chart";
  }
  return "dark";
}

SceneKind parse_scene_kind(const std::string& s) {
  if (s == "dark") return SceneKind::kDark;
  if (s == "gray") return SceneKind::kGray;
  if (s == "chart") return SceneKind::kChart;
  throw InvalidInput("unknown scene kind: " + s);
}

Scene make_chart_scene(std::size_t width, std::size_t height) {
  Scene s(width, height);
  const double cx = 0.75 * static_cast<double>(width);
  const double cy = 0.5 * static_cast<double>(height);
  const double radius = 0.15 * static_cast<double>(std::min(width, height));
  static constexpr double kPatches[6][3] = {
      {0.70, 0.20, 0.15}, {0.20, 0.65, 0.25}, {0.15, 0.25, 0.70},
      {0.75, 0.70, 0.20}, {0.60, 0.25, 0.60}, {0.30, 0.30, 0.30},
  };
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double gx = static_cast<double>(c) / static_cast<double>(std::max<std::size_t>(1, width - 1));
      const double gy = static_cast<double>(r) / static_cast<double>(std::max<std::size_t>(1, height - 1));
      double rgb[3] = {0.15 + 0.35 * gx, 0.15 + 0.30 * gx + 0.05 * gy, 0.20 + 0.25 * gy};
      // 3x2 patch grid on the left half.
      const std::size_t pw = width / 8, ph = height / 5;
      for (std::size_t p = 0; p < 6; ++p) {
        const std::size_t px = width / 16 + (p % 3) * (pw + width / 32);
        const std::size_t py = height / 6 + (p / 3) * (ph + height / 10);
        if (c >= px && c < px + pw && r >= py && r < py + ph) {
          for (int ch = 0; ch < 3; ++ch) rgb[ch] = kPatches[p][ch];
        }
      }
      const double dx = static_cast<double>(c) - cx, dy = static_cast<double>(r) - cy;
      if (dx * dx + dy * dy <= radius * radius) rgb[0] = rgb[1] = rgb[2] = 0.8;
      for (int ch = 0; ch < 3; ++ch) s.at(r, c, ch) = std::clamp(rgb[ch], 0.1, 0.8);
    }
  }
  return s;
}

Scene make_scene(SceneKind kind, std::size_t width, std::size_t height, double level) {
  switch (kind) {
    case SceneKind::kDark: return Scene(width, height, 0.0);
    case SceneKind::kGray: return Scene(width, height, std::clamp(level, 0.0, 1.0));
    case SceneKind::kChart: return make_chart_scene(width, height);
  }
  return Scene(width, height, 0.0);
}

SensorConfig default_sensor() {
  SensorConfig c;
  c.name = "dfm-desk";
  c.susceptibility = {190e6, 60e6, 4.0, 0.0};
  return c;
}

SensorConfig analog_cctv_sensor() {
  SensorConfig c = default_sensor();
  c.name = "cctv-analog";
  c.susceptibility = {341e6, 8e6, 4.0, 0.0};
  return c;
}

SensorConfig dfm_datasheet_sensor() {
  SensorConfig c = default_sensor();
  c.name = "dfm-25g445";
  c.cols_total = 1392;
  c.rows_total = 1040;
  c.cols_effective = 1280;
  c.rows_effective = 960;
  c.border_left = 56;
  c.border_top = 40;
  c.readout_rate = 36e6;
  return c;
}

ChannelConfig default_channel() { return {}; }

// ---------------------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------------------

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kFrequency: return "frequency";
    case SweepAxis::kPower: return "power";
    case SweepAxis::kDistance: return "distance";
    case SweepAxis::kGain: return "gain";
    case SweepAxis::kExposure: return "exposure";
  }
  return "frequency";
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "frequency") return SweepAxis::kFrequency;
  if (s == "power") return SweepAxis::kPower;
  if (s == "distance") return SweepAxis::kDistance;
  if (s == "gain") return SweepAxis::kGain;
  if (s == "exposure") return SweepAxis::kExposure;
  throw InvalidInput("unknown sweep axis: " + s);
}

std::string to_string(SignalSource s) {
  return s == SignalSource::kGaussianNoise ? "gaussian-noise" : "sine";
}

SignalSource parse_signal_source(const std::string& s) {
  if (s == "sine") return SignalSource::kSine;
  if (s == "gaussian-noise" || s == "noise") return SignalSource::kGaussianNoise;
  throw InvalidInput("unknown signal source: " + s);
}

void ExperimentPlan::validate() const {
  sensor.validate();
  channel.validate();
  if (values.empty()) {
    if (!(step > 0.0)) throw InvalidInput("sweep step must be positive");
    if (!(start <= stop)) throw InvalidInput("sweep range bounds must be ordered");
  }
  if (legitimate_frames < 1 || malicious_frames < 1) throw InvalidInput("frame counts must be >= 1");
  if (legitimate_frames < 2) throw InvalidInput("delta SSIM needs at least two legitimate frames");
  if (!(tone_hz > 0.0)) throw InvalidInput("tone_hz must be positive");
  if (amplitude_scale < 0.0) throw InvalidInput("amplitude_scale must be non-negative");
  for (int g : gains) {
    if (g < 0 || g > 29) throw InvalidInput("gain values must be within [0,29]");
  }
}

std::vector<double> ExperimentPlan::axis_values() const {
  if (!values.empty()) return values;
  std::vector<double> out;
  const double span = stop - start;
  const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<int> ExperimentPlan::gain_values() const {
  return gains.empty() ? std::vector<int>{sensor.gain_index} : gains;
}

void apply_axis(SweepAxis axis, double value, SensorConfig& sensor, ChannelConfig& channel) {
  switch (axis) {
    case SweepAxis::kFrequency: channel.carrier_hz = value; break;
    case SweepAxis::kPower: channel.tx_power_dbm = value; break;
    case SweepAxis::kDistance: channel.distance_m = value; break;
    case SweepAxis::kGain: sensor.gain_index = static_cast<int>(std::lround(value)); break;
    case SweepAxis::kExposure: sensor.exposure_us = value; break;
  }
}

AttackScenario build_attack(const ExperimentPlan& plan, const SensorConfig& sensor,
                            const ChannelConfig& channel) {
  AttackScenario attack;
  attack.channel = channel;
  attack.loop = true;
  const double rate = sensor.effective_readout_rate();
  if (plan.source == SignalSource::kSine) {
    attack.signal = sine_signal(plan.tone_hz, rate, channel.carrier_hz);
  } else {
    attack.signal.envelope = gaussian_noise_signal(
        sensor.pixel_count(), derive_seed(plan.seed, {tag(Stream::kNoiseEnvelope)}));
    attack.signal.symbol_rate = rate;
    attack.signal.carrier_hz = channel.carrier_hz;
  }
  for (double& v : attack.signal.envelope) v = std::clamp(v * plan.amplitude_scale, 0.0, 1.0);
  return attack;
}

SweepResult run_sweep_point(const ExperimentPlan& plan, double value, int gain) {
  SensorConfig sensor = plan.sensor;
  sensor.gain_index = gain;
  ChannelConfig channel = plan.channel;
  apply_axis(plan.axis, value, sensor, channel);
  sensor.validate();
  channel.validate();

  const Scene scene = make_scene(plan.scene, sensor.cols_effective, sensor.rows_effective, plan.scene_level);
  const AttackScenario attack = build_attack(plan, sensor, channel);
  const std::uint64_t point = seed_label(value);
  const auto g = static_cast<std::uint64_t>(gain);

  FrameSet frames;
  frames.legitimate = capture_sequence(scene, sensor, nullptr, plan.legitimate_frames,
                                       derive_seed(plan.seed, {point, g, tag(Stream::kLegitimate)}))
                          .frames;
  frames.malicious = capture_sequence(scene, sensor, &attack, plan.malicious_frames,
                                      derive_seed(plan.seed, {point, g, tag(Stream::kMalicious)}))
                         .frames;

  SweepResult row;
  row.swept_value = value;
  row.gain_index = gain;
  row.rx_power_dbm = friis_received_power(channel);
  row.coupling = coupling_factor(channel.carrier_hz, sensor.susceptibility);
  row.metrics = evaluate_protocol(frames);
  return row;
}

std::vector<SweepResult> run_sweep(const ExperimentPlan& plan, const RowCallback& on_row) {
  plan.validate();
  std::vector<std::pair<int, double>> points;
  for (int g : plan.gain_values()) {
    for (double v : plan.axis_values()) points.emplace_back(g, v);
  }
  std::vector<SweepResult> rows(points.size());
  std::mutex emit;
  parallel_for(points.size(), [&](std::size_t i) {
    rows[i] = run_sweep_point(plan, points[i].second, points[i].first);
    if (on_row) {
      std::lock_guard lock(emit);
      on_row(rows[i]);
    }
  });
  return rows;
}

namespace {

std::vector<SweepResult> checked_sweep(const ExperimentPlan& plan, SweepAxis axis,
                                       const RowCallback& on_row) {
  if (plan.axis != axis) throw InvalidInput("plan axis must be " + to_string(axis));
  return run_sweep(plan, on_row);
}

}  // namespace

std::vector<SweepResult> frequency_sweep(const ExperimentPlan& plan, const RowCallback& on_row) {
  return checked_sweep(plan, SweepAxis::kFrequency, on_row);
}

std::vector<SweepResult> power_sweep(const ExperimentPlan& plan, const RowCallback& on_row) {
  return checked_sweep(plan, SweepAxis::kPower, on_row);
}

std::vector<SweepResult> distance_sweep(const ExperimentPlan& plan, const RowCallback& on_row) {
  return checked_sweep(plan, SweepAxis::kDistance, on_row);
}

ExperimentPlan default_frequency_plan() {
  ExperimentPlan p;
  p.name = "frequency";
  p.sensor = default_sensor();
  p.sensor.exposure_us = 1'300.0;
  p.sensor.gain_index = 17;
  p.channel = default_channel();
  p.axis = SweepAxis::kFrequency;
  p.start = 50e6;
  p.stop = 500e6;
  p.step = 5e6;
  p.scene = SceneKind::kChart;
  return p;
}

ExperimentPlan default_power_plan() {
  ExperimentPlan p;
  p.name = "power";
  p.sensor = default_sensor();
  p.sensor.exposure_us = 10.0;
  p.channel = default_channel();
  p.axis = SweepAxis::kPower;
  p.start = -6.8;
  p.stop = 20.1;
  p.step = 2.69;
  p.gains = {0, 10, 20, 25, 29};
  p.scene = SceneKind::kDark;
  return p;
}

ExperimentPlan high_noise_floor_power_plan() {
  ExperimentPlan p = default_power_plan();
  p.name = "power-high-noise-floor";
  p.sensor.dark_current_rate = 28.0;
  p.gains = {25, 29};
  return p;
}

ExperimentPlan default_distance_plan() {
  ExperimentPlan p;
  p.name = "distance";
  p.sensor = default_sensor();
  p.sensor.exposure_us = 400.0;
  p.channel = default_channel();
  p.axis = SweepAxis::kDistance;
  p.values = {0.03, 0.10, 0.20, 0.50};
  p.gains = {0, 25, 29};
  p.scene = SceneKind::kChart;
  return p;
}

std::string sweep_csv_header() {
  return "swept_value,gain_index,rx_power_dbm,coupling,ssim,ms_ssim,l2,uqi,ssim_legitimate,"
         "delta_ssim,comparisons";
}

std::string sweep_csv_row(const SweepResult& r) {
  const auto& m = r.metrics;
  return num(r.swept_value) + "," + std::to_string(r.gain_index) + "," + num(r.rx_power_dbm) + "," +
         num(r.coupling) + "," + num(m.ssim) + "," + num(m.ms_ssim) + "," + num(m.l2) + "," +
         num(m.uqi) + "," + num(m.ssim_legitimate) + "," + num(m.delta_ssim) + "," +
         std::to_string(m.comparisons);
}

std::string sweep_csv_footer(std::size_t rows) { return "# end-of-run rows=" + std::to_string(rows); }

// ---------------------------------------------------------------------------------------
// Pattern injection
// ---------------------------------------------------------------------------------------

SourceImage make_glyph_image(std::size_t width, std::size_t height) {
  SourceImage img;
  img.width = width;
  img.height = height;
  img.channels = 3;
  img.pixels.assign(width * height * 3, 0);
  const double w = static_cast<double>(width), h = static_cast<double>(height);
  auto set = [&](std::size_t x, std::size_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::uint8_t* p = &img.pixels[(y * width + x) * 3];
    p[0] = r;
    p[1] = g;
    p[2] = b;
  };
  const double cx = 0.3 * w, cy = 0.5 * h, outer = 0.22 * std::min(w, h), inner = 0.13 * std::min(w, h);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x), fy = static_cast<double>(y);
      const double d2 = (fx - cx) * (fx - cx) + (fy - cy) * (fy - cy);
      if (d2 <= outer * outer && d2 >= inner * inner) set(x, y, 255, 255, 255);
      // Cross through the ring centre.
      if ((std::abs(fx - cx) < 0.025 * w && std::abs(fy - cy) < inner) ||
          (std::abs(fy - cy) < 0.025 * h && std::abs(fx - cx) < inner)) {
        set(x, y, 255, 255, 255);
      }
      // Block letter "T" and a coloured bar on the right.
      const double tx = 0.62 * w;
      if (fy >= 0.25 * h && fy < 0.33 * h && fx >= tx && fx < tx + 0.22 * w) set(x, y, 255, 255, 255);
      if (fx >= tx + 0.08 * w && fx < tx + 0.14 * w && fy >= 0.25 * h && fy < 0.75 * h) {
        set(x, y, 255, 255, 255);
      }
      if (fy >= 0.82 * h && fy < 0.9 * h && fx >= 0.15 * w && fx < 0.85 * w) set(x, y, 255, 128, 0);
    }
  }
  return img;
}

InjectionPlan default_injection_plan() {
  InjectionPlan p;
  p.sensor = default_sensor();
  p.sensor.exposure_us = 10'000.0;
  p.sensor.gain_index = 29;
  p.channel = default_channel();
  return p;
}

InjectionReport pattern_injection(const SourceImage* image, const InjectionPlan& plan) {
  SensorConfig sensor = plan.sensor;
  if (plan.noise_free) {
    sensor.read_noise_sigma = 0.0;
    sensor.dark_current_rate = 0.0;
    sensor.adc_noise_dn = 0.0;
    sensor.shot_noise = false;
  }
  sensor.validate();
  plan.channel.validate();
  if (plan.frames < 1) throw InvalidInput("injection needs at least one frame");
  if (!(plan.rate_mismatch > -1.0)) throw InvalidInput("rate mismatch must exceed -100%");

  InjectionReport report;
  const double readout_rate = sensor.effective_readout_rate();
  if (image) {
    report.envelope = extract_luminance(*image, sensor.cols_total, sensor.rows_total);
  } else {
    report.envelope = gaussian_noise_signal(sensor.pixel_count(),
                                            derive_seed(plan.seed, {tag(Stream::kNoiseEnvelope)}));
  }

  AttackScenario attack;
  attack.channel = plan.channel;
  attack.loop = true;
  attack.forced_offset = plan.forced_offset;
  attack.signal.envelope = report.envelope;
  attack.signal.symbol_rate = readout_rate * (1.0 + plan.rate_mismatch);
  attack.signal.carrier_hz = plan.channel.carrier_hz;

  const Scene scene = make_scene(plan.scene, sensor.cols_effective, sensor.rows_effective, plan.scene_level);
  CaptureResult attacked = capture_sequence(scene, sensor, &attack, plan.frames, plan.seed);
  CaptureResult clean = capture_sequence(scene, sensor, nullptr, plan.frames, plan.seed);
  report.offset_samples = attacked.offset_samples;
  report.attacked = std::move(attacked.frames);
  report.attacked_raw = std::move(attacked.raw);
  report.clean = std::move(clean.frames);
  report.clean_raw = std::move(clean.raw);
  report.predicted_drift_advance =
      sensor.samples_per_frame() * (1.0 - readout_rate / attack.signal.symbol_rate);

  const std::size_t n = sensor.pixel_count();
  for (std::size_t f = 0; f < plan.frames; ++f) {
    // Luma difference placed back on the total grid; shielded samples are unobserved.
    const Plane<double> ya = luma(report.attacked[f]);
    const Plane<double> yc = luma(report.clean[f]);
    std::vector<double> observed(n, 0.0);
    for (std::size_t r = 0; r < sensor.rows_effective; ++r) {
      for (std::size_t c = 0; c < sensor.cols_effective; ++c) {
        observed[(r + sensor.border_top) * sensor.cols_total + c + sensor.border_left] =
            ya.at(r, c) - yc.at(r, c);
      }
    }
    const CorrelationPeak peak = ncc_peak(report.envelope, observed);
    report.registration.push_back(
        {peak.lag, peak.lag % sensor.cols_total, peak.lag / sensor.cols_total, peak.ncc});
  }

  std::vector<std::vector<double>> diffs;
  for (std::size_t f = 0; f < plan.frames; ++f) {
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
      d[k] = static_cast<double>(report.attacked_raw[f].values[k]) -
             static_cast<double>(report.clean_raw[f].values[k]);
    }
    diffs.push_back(std::move(d));
  }
  for (std::size_t f = 0; f + 1 < plan.frames; ++f) {
    const CorrelationPeak peak = ncc_peak(diffs[f], diffs[f + 1]);
    report.drift_advance.push_back(peak.ncc == 0.0 ? 0.0 : 0.0 - signed_lag(peak.lag, n));
  }
  return report;
}

// ---------------------------------------------------------------------------------------
// Barcode campaign
// ---------------------------------------------------------------------------------------

void BarcodePlan::validate() const {
  sensor.validate();
  channel.validate();
  if (exposures_us.empty() || gains.empty()) throw InvalidInput("barcode grid must not be empty");
  if (frames_per_condition < 1) throw InvalidInput("frames_per_condition must be >= 1");
  if (payloads.empty()) throw InvalidInput("at least one barcode payload is required");
  if (!(illumination > 0.0)) throw InvalidInput("illumination must be positive");
  for (int g : gains) {
    if (g < 0 || g > 29) throw InvalidInput("gain values must be within [0,29]");
  }
}

Scene make_barcode_scene(const BarcodePlan& plan) {
  const std::size_t w = plan.sensor.cols_effective;
  const std::size_t h = plan.sensor.rows_effective;
  RenderStyle style;
  style.bar *= plan.illumination;
  style.background *= plan.illumination;
  Scene scene(w, h, style.background);
  const std::size_t slot = h / plan.payloads.size();
  for (std::size_t i = 0; i < plan.payloads.size(); ++i) {
    BarcodeSpec spec = make_barcode(plan.payloads[i], plan.module_px);
    const std::size_t margin = slot / 8;
    spec.bar_height_px = slot > 2 * margin ? slot - 2 * margin : 1;
    if (spec.width_px() > w) throw InvalidInput("sensor too narrow for the barcode");
    render_barcode(spec, scene, i * slot + margin, (w - spec.width_px()) / 2, style);
  }
  return scene;
}

BarcodeCondition barcode_condition(const BarcodePlan& plan, double exposure_us, int gain,
                                   std::optional<double> tx_power_dbm,
                                   std::vector<BarcodeFrameRecord>* records,
                                   std::size_t condition_index) {
  plan.validate();
  SensorConfig sensor = plan.sensor;
  sensor.exposure_us = exposure_us;
  sensor.gain_index = gain;
  sensor.validate();
  ChannelConfig channel = plan.channel;
  if (tx_power_dbm) channel.tx_power_dbm = *tx_power_dbm;

  std::vector<std::string> expected;
  for (const auto& p : plan.payloads) expected.push_back(make_barcode(p).digits);
  const Scene scene = make_barcode_scene(plan);
  const std::uint64_t point = seed_label(exposure_us);
  const auto g = static_cast<std::uint64_t>(gain);
  const std::uint64_t clean_seed = derive_seed(plan.seed, {point, g, tag(Stream::kLegitimate)});
  const std::uint64_t attack_seed = derive_seed(plan.seed, {point, g, tag(Stream::kMalicious)});

  BarcodeCondition cond;
  cond.exposure_us = exposure_us;
  cond.gain_index = gain;
  cond.frames = plan.frames_per_condition;
  cond.clean_per_code.assign(expected.size(), 0);
  cond.attack_per_code.assign(expected.size(), 0);

  struct FrameOutcome {
    std::vector<std::string> clean, attacked;
  };
  std::vector<FrameOutcome> outcomes(plan.frames_per_condition);
  parallel_for(plan.frames_per_condition, [&](std::size_t i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const RawFrame clean = capture_raw_frame(scene, sensor, nullptr, i, 0.0, clean_seed);
    outcomes[i].clean = decode(demosaic(clean, sensor), plan.decoder);

    // Fresh noise every frame; the transmitter free-runs against the readout clock.
    AttackScenario attack;
    attack.channel = channel;
    attack.loop = true;
    attack.signal.envelope = gaussian_noise_signal(
        sensor.pixel_count(), derive_seed(attack_seed, {idx, tag(Stream::kNoiseEnvelope)}),
        plan.noise_mean, plan.noise_sigma);
    attack.signal.symbol_rate = sensor.effective_readout_rate();
    attack.signal.carrier_hz = channel.carrier_hz;
    const double offset = draw_offset(sensor, derive_seed(attack_seed, {idx}));
    const RawFrame hit = capture_raw_frame(scene, sensor, &attack, i, offset, attack_seed);
    outcomes[i].attacked = decode(demosaic(hit, sensor), plan.decoder);
  });

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (int on = 0; on < 2; ++on) {
      const auto& reads = on ? outcomes[i].attacked : outcomes[i].clean;
      auto& per_code = on ? cond.attack_per_code : cond.clean_per_code;
      if (!reads.empty()) ++(on ? cond.attack_detected : cond.clean_detected);
      for (std::size_t k = 0; k < expected.size(); ++k) {
        if (std::find(reads.begin(), reads.end(), expected[k]) != reads.end()) ++per_code[k];
      }
      if (records) {
        records->push_back({condition_index, exposure_us, gain, i, on == 1, reads});
      }
    }
  }
  return cond;
}

BarcodeCampaign barcode_campaign(const BarcodePlan& plan) {
  plan.validate();
  BarcodeCampaign out;
  std::size_t index = 0;
  for (double e : plan.exposures_us) {
    for (int g : plan.gains) {
      out.conditions.push_back(barcode_condition(plan, e, g, std::nullopt, &out.frames, index++));
    }
  }
  return out;
}

BarcodePlan default_barcode_plan() {
  BarcodePlan p;
  p.sensor = default_sensor();
  p.sensor.adc_noise_dn = 1.0;
  p.channel = default_channel();
  p.illumination = 0.010;
  return p;
}

std::string barcode_csv_header() {
  return "exposure_us,gain_index,frames,clean_detected,attack_detected,clean_rate,attack_rate,"
         "clean_per_code,attack_per_code";
}

std::string barcode_csv_row(const BarcodeCondition& c) {
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
    return s;
  };
  return num(c.exposure_us) + "," + std::to_string(c.gain_index) + "," + std::to_string(c.frames) +
         "," + std::to_string(c.clean_detected) + "," + std::to_string(c.attack_detected) + "," +
         num(c.clean_rate()) + "," + num(c.attack_rate()) + "," + join(c.clean_per_code) + "," +
         join(c.attack_per_code);
}

std::string barcode_frames_csv_header() {
  return "condition,exposure_us,gain_index,frame_index,attack_on,n_decoded,digits";
}

std::string barcode_frames_csv_row(const BarcodeFrameRecord& r) {
  std::string digits;
  for (std::size_t i = 0; i < r.decoded.size(); ++i) digits += (i ? ";" : "") + r.decoded[i];
  return std::to_string(r.condition) + "," + num(r.exposure_us) + "," + std::to_string(r.gain_index) +
         "," + std::to_string(r.frame_index) + "," + (r.attack_on ? "1" : "0") + "," +
         std::to_string(r.decoded.size()) + "," + digits;
}

// ---------------------------------------------------------------------------------------
// Exposure-drop detector
// ---------------------------------------------------------------------------------------

void DetectorPlan::validate() const {
  sensor.validate();
  channel.validate();
  if (stream_frames < 1) throw InvalidInput("stream must contain at least one frame");
  if (!(probe_probability > 0.0 && probe_probability <= 1.0)) {
    throw InvalidInput("probe_probability must be within (0,1]");
  }
  if (!(min_exposure_us > 0.0)) throw InvalidInput("min_exposure_us must be positive");
  if (!(ambient > 0.0)) throw InvalidInput("ambient must be positive");
}

std::vector<std::size_t> probe_schedule(const DetectorPlan& plan) {
  std::mt19937_64 rng(derive_seed(plan.seed, {tag(Stream::kProbeSchedule)}));
  std::bernoulli_distribution coin(plan.probe_probability);
  std::vector<std::size_t> probes;
  for (std::size_t i = 0; i < plan.stream_frames; ++i) {
    if (coin(rng)) probes.push_back(i);
  }
  if (probes.empty()) probes.push_back(plan.stream_frames - 1);
  return probes;
}

DetectorReport exposure_drop_detector(const DetectorPlan& plan) {
  plan.validate();
  SensorConfig probe = plan.sensor;
  probe.exposure_us = plan.min_exposure_us;
  probe.reference_exposure_us = plan.sensor.reference_exposure_us / plan.ambient;
  probe.validate();

  ExperimentPlan signal_plan;
  signal_plan.source = plan.source;
  signal_plan.tone_hz = plan.tone_hz;
  signal_plan.seed = plan.seed;
  const AttackScenario attack = build_attack(signal_plan, probe, plan.channel);

  const Scene scene = make_scene(plan.scene, probe.cols_effective, probe.rows_effective, plan.scene_level);
  const std::uint64_t stream_seed = derive_seed(plan.seed, {tag(Stream::kLegitimate)});
  const double offset = draw_offset(probe, stream_seed);

  DetectorReport report;
  report.probe_frames = probe_schedule(plan);
  const std::size_t n = report.probe_frames.size();
  report.probe_luma_attack_off.resize(n);
  report.probe_luma_attack_on.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const std::size_t frame = report.probe_frames[i];
    report.probe_luma_attack_off[i] =
        mean_luma(demosaic(capture_raw_frame(scene, probe, nullptr, frame, 0.0, stream_seed), probe));
    report.probe_luma_attack_on[i] =
        mean_luma(demosaic(capture_raw_frame(scene, probe, &attack, frame, offset, stream_seed), probe));
  });
  std::size_t fp = 0, tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool off = report.probe_luma_attack_off[i] > plan.threshold_dn;
    const bool on = report.probe_luma_attack_on[i] > plan.threshold_dn;
    report.flags_attack_off.push_back(off);
    report.flags_attack_on.push_back(on);
    fp += off;
    tp += on;
  }
  report.false_positive_rate = static_cast<double>(fp) / static_cast<double>(n);
  report.true_positive_rate = static_cast<double>(tp) / static_cast<double>(n);
  return report;
}

DetectorPlan default_detector_plan() {
  DetectorPlan p;
  p.sensor = default_sensor();
  p.sensor.gain_index = 20;
  p.channel = default_channel();
  p.scene = SceneKind::kChart;
  p.threshold_dn = 4.0;
  return p;
}

std::string detector_csv(const DetectorPlan& plan, const DetectorReport& r) {
  std::string out = "probe_frame,mean_luma_attack_off,mean_luma_attack_on,flag_attack_off,flag_attack_on\n";
  for (std::size_t i = 0; i < r.probe_frames.size(); ++i) {
    out += std::to_string(r.probe_frames[i]) + "," + num(r.probe_luma_attack_off[i]) + "," +
           num(r.probe_luma_attack_on[i]) + "," + (r.flags_attack_off[i] ? "1" : "0") + "," +
           (r.flags_attack_on[i] ? "1" : "0") + "\n";
  }
  out += "# threshold_dn=" + num(plan.threshold_dn) + " ambient=" + num(plan.ambient) +
         " probes=" + std::to_string(r.probe_frames.size()) +
         " false_positive_rate=" + num(r.false_positive_rate) +
         " true_positive_rate=" + num(r.true_positive_rate) + "\n";
  return out;
}

}  // namespace ccdsim
