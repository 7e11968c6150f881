// ccdsim command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccdsim/attack.hpp"
#include "ccdsim/capture.hpp"
#include "ccdsim/experiments.hpp"
#include "ccdsim/io.hpp"

namespace fs = std::filesystem;
using namespace ccdsim;
using io::Json;

namespace {

struct Globals {
  std::vector<std::string> configs;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool quiet = false;
};

void note(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

std::string frame_name(const std::string& stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem.c_str(), i, ext);
  return buf;
}

/// Applies every --config file, in order, on top of `plan`.
template <typename Plan>
Json load_plan(const Globals& g, Plan& plan) {
  Json sources = Json::array();
  for (const auto& path : g.configs) {
    io::apply_json(io::read_json(path), plan);
    sources.push_back(path);
  }
  if (g.seed) plan.seed = *g.seed;
  return sources;
}

Json manifest(const std::string& command, const Json& sources, const Json& plan, std::uint64_t seed) {
  Json m;
  m["command"] = command;
  m["calibration_version"] = kCalibrationVersion;
  m["config_files"] = sources;
  m["seed"] = seed;
  m["plan"] = plan;
  return m;
}

void write_manifest(const fs::path& dir, const Json& m) { io::write_text(dir / "manifest.json", m.dump(2) + "\n"); }

ExperimentPlan capture_defaults() {
  ExperimentPlan p;
  p.name = "capture";
  p.sensor = default_sensor();
  p.channel = default_channel();
  return p;
}

// ---------------------------------------------------------------------------------------

struct CaptureArgs {
  std::size_t frames = 1;
  bool attack = false;
  bool raw = false;
  std::string scene;
  std::optional<double> forced_offset;
};

void cmd_capture(const Globals& g, const CaptureArgs& a) {
  ExperimentPlan plan = capture_defaults();
  const Json sources = load_plan(g, plan);
  if (!a.scene.empty()) plan.scene = parse_scene_kind(a.scene);
  if (a.frames == 0) throw InvalidInput("--frames must be at least 1");
  plan.sensor.validate();
  plan.channel.validate();

  const Scene scene =
      make_scene(plan.scene, plan.sensor.cols_effective, plan.sensor.rows_effective, plan.scene_level);
  std::optional<AttackScenario> attack;
  if (a.attack) {
    attack = build_attack(plan, plan.sensor, plan.channel);
    attack->forced_offset = a.forced_offset;
  }
  const auto result = capture_sequence(scene, plan.sensor, attack ? &*attack : nullptr, a.frames, plan.seed);

  const fs::path dir = g.out;
  Json files = Json::array();
  for (std::size_t i = 0; i < result.frames.size(); ++i) {
    io::write_ppm(dir / frame_name("frame", i, "ppm"), result.frames[i]);
    files.push_back(frame_name("frame", i, "ppm"));
    if (a.raw) {
      io::write_pgm(dir / frame_name("raw", i, "pgm"), result.raw[i]);
      files.push_back(frame_name("raw", i, "pgm"));
    }
  }
  Json m = manifest("capture", sources, io::to_json(plan), plan.seed);
  m["frames"] = a.frames;
  m["attack"] = a.attack;
  m["offset_samples"] = a.attack ? Json(result.offset_samples) : Json(nullptr);
  m["files"] = files;
  write_manifest(dir, m);
  note(g, "wrote " + std::to_string(a.frames) + " frame(s) to " + dir.string());
}

// ---------------------------------------------------------------------------------------

struct SweepArgs {
  std::optional<double> start, stop, step;
  std::vector<double> values;
  std::vector<int> gains;
};

void cmd_sweep(const Globals& g, SweepAxis axis, const SweepArgs& a) {
  ExperimentPlan plan = axis == SweepAxis::kFrequency ? default_frequency_plan()
                        : axis == SweepAxis::kPower   ? default_power_plan()
                                                      : default_distance_plan();
  const Json sources = load_plan(g, plan);
  if (plan.axis != axis) throw InvalidInput("plan axis '" + to_string(plan.axis) + "' does not match the subcommand");
  if (a.start) plan.start = *a.start;
  if (a.stop) plan.stop = *a.stop;
  if (a.step) plan.step = *a.step;
  if (a.start || a.stop || a.step) plan.values.clear();
  if (!a.values.empty()) plan.values = a.values;
  if (!a.gains.empty()) plan.gains = a.gains;
  plan.validate();

  const fs::path dir = g.out;
  const fs::path csv = dir / ("sweep_" + to_string(axis) + ".csv");
  const std::size_t total = plan.axis_values().size() * plan.gain_values().size();
  write_manifest(dir, manifest("sweep-" + to_string(axis), sources, io::to_json(plan), plan.seed));

  // Rows are appended as points finish; the final rewrite sorts them and adds the footer.
  std::ofstream stream(csv, std::ios::binary | std::ios::trunc);
  if (!stream) throw io::IoError("cannot write " + csv.string());
  stream << sweep_csv_header() << "\n" << std::flush;
  std::size_t done = 0;
  const auto rows = run_sweep(plan, [&](const SweepResult& r) {
    stream << sweep_csv_row(r) << "\n" << std::flush;
    ++done;
    if (!g.quiet) std::cerr << "\r" << done << "/" << total << " points" << std::flush;
  });
  stream.close();
  if (!g.quiet) std::cerr << "\n";

  std::string text = sweep_csv_header() + "\n";
  for (const auto& r : rows) text += sweep_csv_row(r) + "\n";
  text += sweep_csv_footer(rows.size()) + "\n";
  io::write_text(csv, text);
  note(g, "wrote " + csv.string());
}

// ---------------------------------------------------------------------------------------

struct InjectArgs {
  std::string image;
  std::optional<std::size_t> frames;
  std::optional<double> rate_mismatch;
  std::optional<double> forced_offset;
  bool noisy = false;
  bool noise_envelope = false;
};

void cmd_inject(const Globals& g, const InjectArgs& a) {
  InjectionPlan plan = default_injection_plan();
  const Json sources = load_plan(g, plan);
  if (a.frames) plan.frames = *a.frames;
  if (a.rate_mismatch) plan.rate_mismatch = *a.rate_mismatch;
  if (a.forced_offset) plan.forced_offset = a.forced_offset;
  if (a.noisy) plan.noise_free = false;
  plan.sensor.validate();

  if (!a.image.empty() && a.noise_envelope) throw InvalidInput("--image and --noise-envelope are exclusive");
  std::optional<SourceImage> image;
  if (!a.image.empty()) {
    image = io::read_source_image(a.image);
  } else if (!a.noise_envelope) {
    image = make_glyph_image(plan.sensor.cols_total / 2, plan.sensor.rows_total / 2);
  }
  const auto report = pattern_injection(image ? &*image : nullptr, plan);

  const fs::path dir = g.out;
  std::string reg = "frame,lag,x_hat,y_hat,ncc,drift_advance\n";
  for (std::size_t i = 0; i < report.registration.size(); ++i) {
    const auto& r = report.registration[i];
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.9g,", i, r.lag, r.x_hat, r.y_hat, r.ncc);
    reg += buf;
    if (i < report.drift_advance.size()) {
      std::snprintf(buf, sizeof buf, "%.9g", report.drift_advance[i]);
      reg += buf;
    }
    reg += "\n";
  }
  char footer[160];
  std::snprintf(footer, sizeof footer, "# offset_samples=%.9g predicted_drift_advance=%.9g\n",
                report.offset_samples, report.predicted_drift_advance);
  reg += footer;

  for (std::size_t i = 0; i < report.attacked.size(); ++i) {
    io::write_ppm(dir / frame_name("attacked", i, "ppm"), report.attacked[i]);
    io::write_ppm(dir / frame_name("clean", i, "ppm"), report.clean[i]);
  }
  io::write_text(dir / "registration.csv", reg);
  io::write_envelope_csv(dir / "envelope.csv", report.envelope);
  Json m = manifest("inject", sources, io::to_json(plan), plan.seed);
  m["image"] = !a.image.empty() ? Json(a.image) : Json(a.noise_envelope ? "noise" : "glyph");
  m["offset_samples"] = report.offset_samples;
  write_manifest(dir, m);
  note(g, "wrote " + std::to_string(report.attacked.size()) + " frame pair(s) to " + dir.string());
}

// ---------------------------------------------------------------------------------------

void cmd_barcode(const Globals& g, std::optional<std::size_t> frames) {
  BarcodePlan plan = default_barcode_plan();
  const Json sources = load_plan(g, plan);
  if (frames) plan.frames_per_condition = *frames;
  plan.validate();

  const auto campaign = barcode_campaign(plan);
  const fs::path dir = g.out;
  std::string summary = barcode_csv_header() + "\n";
  for (const auto& c : campaign.conditions) summary += barcode_csv_row(c) + "\n";
  std::string detail = barcode_frames_csv_header() + "\n";
  for (const auto& r : campaign.frames) detail += barcode_frames_csv_row(r) + "\n";
  io::write_text(dir / "barcode.csv", summary);
  io::write_text(dir / "barcode_frames.csv", detail);
  write_manifest(dir, manifest("barcode", sources, io::to_json(plan), plan.seed));
  note(g, "wrote " + (dir / "barcode.csv").string());
}

void cmd_defend(const Globals& g, std::optional<std::size_t> frames) {
  DetectorPlan plan = default_detector_plan();
  const Json sources = load_plan(g, plan);
  if (frames) plan.stream_frames = *frames;
  plan.validate();

  const auto report = exposure_drop_detector(plan);
  const fs::path dir = g.out;
  io::write_text(dir / "detector.csv", detector_csv(plan, report));
  write_manifest(dir, manifest("defend", sources, io::to_json(plan), plan.seed));
  if (!g.quiet) {
    std::fprintf(stderr, "probes=%zu false_positive_rate=%.4f true_positive_rate=%.4f\n",
                 report.probe_frames.size(), report.false_positive_rate, report.true_positive_rate);
  }
}

// ---------------------------------------------------------------------------------------

struct ExportArgs {
  std::string image;
  double tx_rate = 25e6;
  std::optional<double> iq_rate;
  double f_offset = 0.0;
  bool envelope_csv = false;
  std::string name = "attack";
};

void cmd_export_iq(const Globals& g, const ExportArgs& a) {
  ExperimentPlan plan = capture_defaults();
  const Json sources = load_plan(g, plan);
  plan.sensor.validate();
  plan.channel.validate();
  const SourceImage image = io::read_source_image(a.image);
  const double iq_rate = a.iq_rate.value_or(a.tx_rate);

  const auto envelope = extract_luminance(image, plan.sensor.cols_total, plan.sensor.rows_total);
  const auto resampled = resample(envelope, plan.sensor.effective_readout_rate(), a.tx_rate);
  const auto iq = modulate(resampled, a.tx_rate, plan.channel.carrier_hz, iq_rate, a.f_offset);

  const fs::path dir = g.out;
  io::write_iq(dir / (a.name + ".iq"), iq);
  io::write_sidecar(dir / (a.name + ".json"),
                    io::IqSidecar{iq_rate, plan.channel.carrier_hz, a.tx_rate, a.f_offset, iq.size()});
  if (a.envelope_csv) io::write_envelope_csv(dir / (a.name + "_envelope.csv"), envelope);
  note(g, "wrote " + std::to_string(iq.size()) + " IQ samples to " + (dir / (a.name + ".iq")).string());
}

// ---------------------------------------------------------------------------------------

void cmd_defaults(const Globals& g) {
  const fs::path dir = g.out;
  auto sensor_file = [](const SensorConfig& s) {
    Json j;
    j["sensor"] = io::to_json(s);
    j["channel"] = io::to_json(default_channel());
    return j.dump(2) + "\n";
  };
  io::write_text(dir / "default.json", sensor_file(default_sensor()));
  io::write_text(dir / "analog_cctv.json", sensor_file(analog_cctv_sensor()));
  io::write_text(dir / "dfm_datasheet.json", sensor_file(dfm_datasheet_sensor()));
  SensorConfig cmos = default_sensor();
  cmos.name = "cmos-desk";
  cmos.architecture = Architecture::kCmos;
  io::write_text(dir / "cmos.json", sensor_file(cmos));
  io::write_text(dir / "plans" / "frequency.json", io::to_json(default_frequency_plan()).dump(2) + "\n");
  io::write_text(dir / "plans" / "power.json", io::to_json(default_power_plan()).dump(2) + "\n");
  io::write_text(dir / "plans" / "power_high_noise.json", io::to_json(high_noise_floor_power_plan()).dump(2) + "\n");
  io::write_text(dir / "plans" / "distance.json", io::to_json(default_distance_plan()).dump(2) + "\n");
  io::write_text(dir / "plans" / "injection.json", io::to_json(default_injection_plan()).dump(2) + "\n");
  io::write_text(dir / "plans" / "barcode.json", io::to_json(default_barcode_plan()).dump(2) + "\n");
  io::write_text(dir / "plans" / "detector.json", io::to_json(default_detector_plan()).dump(2) + "\n");
  note(g, "wrote default configurations to " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CCD readout interference simulator"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.configs, "JSON file applied over the subcommand's defaults (repeatable)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed (overrides the config)");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "suppress progress messages");
  // Global flags are accepted after the subcommand name too.
  app.fallthrough();

  CaptureArgs cap;
  auto* capture = app.add_subcommand("capture", "capture frames with the attack on or off");
  capture->add_option("--frames", cap.frames, "number of consecutive frames")->capture_default_str();
  capture->add_flag("--attack", cap.attack, "transmit the configured attack signal");
  capture->add_option("--scene", cap.scene, "dark, gray or chart");
  capture->add_option("--forced-offset", cap.forced_offset, "pin the attack clock offset (readout samples)");
  capture->add_flag("--raw", cap.raw, "also write raw sensor samples as PGM");

  SweepArgs sw;
  std::vector<std::pair<CLI::App*, SweepAxis>> sweeps;
  for (auto [name, axis] : {std::pair{"sweep-frequency", SweepAxis::kFrequency},
                            std::pair{"sweep-power", SweepAxis::kPower},
                            std::pair{"sweep-distance", SweepAxis::kDistance}}) {
    auto* sub = app.add_subcommand(name, "sweep one attack parameter and report image quality");
    sub->add_option("--start", sw.start, "first axis value");
    sub->add_option("--stop", sw.stop, "last axis value");
    sub->add_option("--step", sw.step, "axis step");
    sub->add_option("--values", sw.values, "explicit axis values")->delimiter(',');
    sub->add_option("--gains", sw.gains, "gain indices")->delimiter(',');
    sweeps.emplace_back(sub, axis);
  }

  InjectArgs inj;
  auto* inject = app.add_subcommand("inject", "rate-matched pattern injection with registration");
  inject->add_option("--image", inj.image, "P6/P7 source image (default: built-in glyph)")->check(CLI::ExistingFile);
  inject->add_flag("--noise-envelope", inj.noise_envelope, "inject one frame of seeded Gaussian noise instead");
  inject->add_option("--frames", inj.frames, "number of frames");
  inject->add_option("--rate-mismatch", inj.rate_mismatch, "relative attack clock error");
  inject->add_option("--forced-offset", inj.forced_offset, "pin the attack clock offset (readout samples)");
  inject->add_flag("--noisy", inj.noisy, "keep sensor noise enabled");

  std::optional<std::size_t> bar_frames;
  auto* barcode = app.add_subcommand("barcode", "barcode scanning campaign");
  barcode->add_option("--frames", bar_frames, "frames per condition");

  std::optional<std::size_t> def_frames;
  auto* defend = app.add_subcommand("defend", "exposure-drop injection detector");
  defend->add_option("--frames", def_frames, "stream length in frames");

  ExportArgs ex;
  auto* export_iq = app.add_subcommand("export-iq", "image to baseband IQ for a radio front end");
  export_iq->add_option("--image", ex.image, "P6/P7 source image")->required()->check(CLI::ExistingFile);
  export_iq->add_option("--tx-rate", ex.tx_rate, "transmit symbol rate")->capture_default_str();
  export_iq->add_option("--iq-rate", ex.iq_rate, "IQ sample rate (default: the transmit rate)");
  export_iq->add_option("--f-offset", ex.f_offset, "baseband frequency offset in Hz")->capture_default_str();
  export_iq->add_option("--name", ex.name, "output file stem")->capture_default_str();
  export_iq->add_flag("--envelope-csv", ex.envelope_csv, "also dump the luminance envelope");

  auto* defaults = app.add_subcommand("defaults", "write the built-in configurations as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*capture) cmd_capture(g, cap);
    for (auto& [sub, axis] : sweeps) {
      if (*sub) cmd_sweep(g, axis, sw);
    }
    if (*inject) cmd_inject(g, inj);
    if (*barcode) cmd_barcode(g, bar_frames);
    if (*defend) cmd_defend(g, def_frames);
    if (*export_iq) cmd_export_iq(g, ex);
    if (*defaults) cmd_defaults(g);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
