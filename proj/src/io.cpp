#include "ccdsim/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace ccdsim::io {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------------------
// Plain files
// ---------------------------------------------------------------------------------------

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("short write to " + path.string());
  }
  fs::rename(tmp, path);
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  write_text(path, std::string(bytes.begin(), bytes.end()));
}

// ---------------------------------------------------------------------------------------
// Netpbm
// ---------------------------------------------------------------------------------------

namespace {

class ByteReader {
 public:
  ByteReader(std::string data, fs::path path) : data_(std::move(data)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(path_.string() + ": " + what);
  }

  // Next whitespace-delimited token, skipping '#' comments.
  std::string token() {
    for (;;) {
      while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
      if (pos_ < data_.size() && data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) fail("truncated header");
    return data_.substr(start, pos_ - start);
  }

  std::size_t number() {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }) || t.size() > 9) {
      fail("bad header field '" + t + "'");
    }
    return std::stoul(t);
  }

  std::string line() {
    if (pos_ >= data_.size()) fail("truncated header");
    std::string out;
    while (pos_ < data_.size() && data_[pos_] != '\n') out += data_[pos_++];
    if (pos_ < data_.size()) ++pos_;
    return out;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void end_header() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      fail("missing raster");
    }
    ++pos_;
  }

  const std::uint8_t* raster(std::size_t bytes) {
    if (data_.size() - pos_ != bytes) fail("raster size does not match header");
    return reinterpret_cast<const std::uint8_t*>(data_.data() + pos_);
  }

 private:
  std::string data_;
  fs::path path_;
  std::size_t pos_ = 0;
};

int bits_for_maxval(std::size_t maxval, const ByteReader& r) {
  for (int b = 1; b <= 16; ++b) {
    if (maxval == (1u << b) - 1u) return b;
  }
  r.fail("maxval must be 2^bits - 1 with bits in [1,16]");
}

void put_sample(std::string& out, std::uint16_t v, bool wide) {
  if (wide) out += static_cast<char>(v >> 8);
  out += static_cast<char>(v & 0xff);
}

std::uint16_t get_sample(const std::uint8_t*& p, bool wide) {
  std::uint16_t v = *p++;
  if (wide) v = static_cast<std::uint16_t>((v << 8) | *p++);
  return v;
}

}  // namespace

void write_ppm(const fs::path& path, const RgbFrame& frame) {
  const bool wide = frame.adc_bits() > 8;
  std::string out = "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) +
                    "\n" + std::to_string(frame.max_value()) + "\n";
  out.reserve(out.size() + frame.samples().size() * (wide ? 2 : 1));
  for (std::uint16_t v : frame.samples()) put_sample(out, v, wide);
  write_text(path, out);
}

RgbFrame read_ppm(const fs::path& path) {
  ByteReader r(read_text(path), path);
  if (r.token() != "P6") r.fail("not a binary PPM (P6)");
  const std::size_t w = r.number(), h = r.number(), maxval = r.number();
  const int bits = bits_for_maxval(maxval, r);
  r.end_header();
  const bool wide = maxval > 255;
  const std::uint8_t* p = r.raster(w * h * 3 * (wide ? 2 : 1));
  RgbFrame frame(w, h, bits);
  for (std::size_t row = 0; row < h; ++row) {
    for (std::size_t col = 0; col < w; ++col) {
      for (int ch = 0; ch < 3; ++ch) {
        const std::uint16_t v = get_sample(p, wide);
        if (v > maxval) r.fail("sample exceeds maxval");
        frame.at(row, col, ch) = v;
      }
    }
  }
  return frame;
}

void write_pgm(const fs::path& path, const RawFrame& raw) {
  const bool wide = raw.adc_bits > 8;
  const auto maxval = (1u << raw.adc_bits) - 1u;
  std::string out = "P5\n" + std::to_string(raw.values.width()) + " " +
                    std::to_string(raw.values.height()) + "\n" + std::to_string(maxval) + "\n";
  for (std::uint16_t v : raw.values.values()) put_sample(out, v, wide);
  write_text(path, out);
}

RawFrame read_pgm(const fs::path& path) {
  ByteReader r(read_text(path), path);
  if (r.token() != "P5") r.fail("not a binary PGM (P5)");
  const std::size_t w = r.number(), h = r.number(), maxval = r.number();
  RawFrame raw;
  raw.adc_bits = bits_for_maxval(maxval, r);
  r.end_header();
  const bool wide = maxval > 255;
  const std::uint8_t* p = r.raster(w * h * (wide ? 2 : 1));
  raw.values = Plane<std::uint16_t>(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    raw.values[i] = get_sample(p, wide);
    if (raw.values[i] > maxval) r.fail("sample exceeds maxval");
  }
  return raw;
}

SourceImage read_source_image(const fs::path& path) {
  ByteReader r(read_text(path), path);
  const std::string magic = r.token();
  SourceImage img;
  if (magic == "P6") {
    img.width = r.number();
    img.height = r.number();
    if (r.number() != 255) r.fail("source images must use 8-bit samples");
    img.channels = 3;
    r.end_header();
  } else if (magic == "P7") {
    std::size_t depth = 0, maxval = 0;
    std::string tupltype;
    r.line();
    for (;;) {
      std::istringstream ls(r.line());
      std::string key;
      ls >> key;
      if (key.empty() || key[0] == '#') continue;
      if (key == "ENDHDR") break;
      if (key == "WIDTH") ls >> img.width;
      else if (key == "HEIGHT") ls >> img.height;
      else if (key == "DEPTH") ls >> depth;
      else if (key == "MAXVAL") ls >> maxval;
      else if (key == "TUPLTYPE") ls >> tupltype;
      else r.fail("unknown PAM header key " + key);
    }
    if (maxval != 255) r.fail("source images must use 8-bit samples");
    if (!((depth == 3 && tupltype == "RGB") || (depth == 4 && tupltype == "RGB_ALPHA"))) {
      r.fail("PAM must be RGB or RGB_ALPHA");
    }
    img.channels = static_cast<int>(depth);
  } else {
    r.fail("unsupported image format (need P6 or P7)");
  }
  const std::size_t bytes = img.width * img.height * static_cast<std::size_t>(img.channels);
  const std::uint8_t* p = r.raster(bytes);
  img.pixels.assign(p, p + bytes);
  img.validate();
  return img;
}

void write_source_image(const fs::path& path, const SourceImage& image) {
  image.validate();
  std::string out;
  if (image.channels == 3) {
    out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  } else {
    out = "P7\nWIDTH " + std::to_string(image.width) + "\nHEIGHT " + std::to_string(image.height) +
          "\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n";
  }
  out.append(image.pixels.begin(), image.pixels.end());
  write_text(path, out);
}

// ---------------------------------------------------------------------------------------
// IQ and envelopes
// ---------------------------------------------------------------------------------------

void write_iq(const fs::path& path, const std::vector<std::complex<float>>& iq) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(iq.size() * 8);
  auto put = [&bytes](float f) {
    auto u = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  };
  for (const auto& s : iq) {
    put(s.real());
    put(s.imag());
  }
  write_bytes(path, bytes);
}

std::vector<std::complex<float>> read_iq(const fs::path& path) {
  const std::string data = read_text(path);
  if (data.size() % 8 != 0) throw IoError(path.string() + ": IQ file length is not a multiple of 8");
  auto get = [&data](std::size_t at) {
    std::uint32_t u = 0;
    for (int i = 0; i < 4; ++i) u |= std::uint32_t(static_cast<std::uint8_t>(data[at + i])) << (8 * i);
    return std::bit_cast<float>(u);
  };
  std::vector<std::complex<float>> iq(data.size() / 8);
  for (std::size_t i = 0; i < iq.size(); ++i) iq[i] = {get(8 * i), get(8 * i + 4)};
  return iq;
}

void write_sidecar(const fs::path& path, const IqSidecar& sidecar) {
  write_text(path, to_json(sidecar).dump(2) + "\n");
}

IqSidecar read_sidecar(const fs::path& path) {
  IqSidecar s;
  apply_json(read_json(path), s);
  return s;
}

void write_envelope_csv(const fs::path& path, const std::vector<double>& envelope) {
  std::string out = "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, envelope[i]);
    out += buf;
  }
  write_text(path, out);
}

std::vector<double> read_envelope_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  if (line != "index,value") throw IoError(path.string() + ": bad envelope header");
  std::vector<double> out;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path.string() + ": bad envelope row");
    if (std::stoul(line.substr(0, comma)) != out.size()) throw IoError(path.string() + ": index gap");
    out.push_back(std::stod(line.substr(comma + 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------------------

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

namespace {

// Visits the keys of an object, rejecting any that the schema does not name.
class Fields {
 public:
  Fields(const Json& j, std::string what, std::initializer_list<const char*> keys)
      : j_(j), what_(std::move(what)) {
    if (!j.is_object()) throw InvalidInput(what_ + " must be a JSON object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
      if (!allowed.count(k)) throw InvalidInput("unknown key '" + k + "' in " + what_);
    }
  }

  template <typename T>
  void get(const char* key, T& out) const {
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw InvalidInput("bad value for '" + std::string(key) + "' in " + what_);
    }
  }

  template <typename T, typename Parse>
  void get_enum(const char* key, T& out, Parse parse) const {
    std::string s;
    get(key, s);
    if (j_.contains(key)) out = parse(s);
  }

  template <typename T>
  void get_object(const char* key, T& out) const {
    if (j_.contains(key)) apply_json(j_.at(key), out);
  }

  const Json& json() const { return j_; }

 private:
  const Json& j_;
  std::string what_;
};

}  // namespace

Json to_json(const SusceptibilityProfile& p) {
  return {{"resonant_hz", p.resonant_hz},
          {"bandwidth_hz", p.bandwidth_hz},
          {"peak_coupling", p.peak_coupling},
          {"floor_coupling", p.floor_coupling}};
}

void apply_json(const Json& j, SusceptibilityProfile& p) {
  Fields f(j, "susceptibility", {"resonant_hz", "bandwidth_hz", "peak_coupling", "floor_coupling"});
  f.get("resonant_hz", p.resonant_hz);
  f.get("bandwidth_hz", p.bandwidth_hz);
  f.get("peak_coupling", p.peak_coupling);
  f.get("floor_coupling", p.floor_coupling);
}

Json to_json(const SensorConfig& c) {
  return {{"name", c.name},
          {"architecture", to_string(c.architecture)},
          {"cols_total", c.cols_total},
          {"rows_total", c.rows_total},
          {"cols_effective", c.cols_effective},
          {"rows_effective", c.rows_effective},
          {"border_left", c.border_left},
          {"border_top", c.border_top},
          {"frame_rate", c.frame_rate},
          {"readout_rate", c.readout_rate ? Json(*c.readout_rate) : Json(nullptr)},
          {"exposure_us", c.exposure_us},
          {"reference_exposure_us", c.reference_exposure_us},
          {"gain_index", c.gain_index},
          {"gain_db_per_step", c.gain_db_per_step},
          {"adc_bits", c.adc_bits},
          {"full_well", c.full_well},
          {"dark_current_rate", c.dark_current_rate},
          {"read_noise_sigma", c.read_noise_sigma},
          {"adc_noise_dn", c.adc_noise_dn},
          {"shot_noise", c.shot_noise},
          {"cfa", to_string(c.cfa)},
          {"cmos_coupling_factor", c.cmos_coupling_factor},
          {"susceptibility", to_json(c.susceptibility)}};
}

void apply_json(const Json& j, SensorConfig& c) {
  Fields f(j, "sensor config",
           {"name", "architecture", "cols_total", "rows_total", "cols_effective", "rows_effective",
            "border_left", "border_top", "frame_rate", "readout_rate", "exposure_us",
            "reference_exposure_us", "gain_index", "gain_db_per_step", "adc_bits", "full_well",
            "dark_current_rate", "read_noise_sigma", "adc_noise_dn", "shot_noise", "cfa",
            "cmos_coupling_factor", "susceptibility"});
  f.get("name", c.name);
  f.get_enum("architecture", c.architecture, parse_architecture);
  f.get("cols_total", c.cols_total);
  f.get("rows_total", c.rows_total);
  f.get("cols_effective", c.cols_effective);
  f.get("rows_effective", c.rows_effective);
  f.get("border_left", c.border_left);
  f.get("border_top", c.border_top);
  f.get("frame_rate", c.frame_rate);
  if (j.contains("readout_rate")) {
    if (j.at("readout_rate").is_null()) {
      c.readout_rate.reset();
    } else {
      double rate = 0.0;
      f.get("readout_rate", rate);
      c.readout_rate = rate;
    }
  }
  f.get("exposure_us", c.exposure_us);
  f.get("reference_exposure_us", c.reference_exposure_us);
  f.get("gain_index", c.gain_index);
  f.get("gain_db_per_step", c.gain_db_per_step);
  f.get("adc_bits", c.adc_bits);
  f.get("full_well", c.full_well);
  f.get("dark_current_rate", c.dark_current_rate);
  f.get("read_noise_sigma", c.read_noise_sigma);
  f.get("adc_noise_dn", c.adc_noise_dn);
  f.get("shot_noise", c.shot_noise);
  f.get_enum("cfa", c.cfa, parse_cfa);
  f.get("cmos_coupling_factor", c.cmos_coupling_factor);
  f.get_object("susceptibility", c.susceptibility);
}

Json to_json(const ChannelConfig& c) {
  return {{"tx_power_dbm", c.tx_power_dbm},
          {"tx_gain_dbi", c.tx_gain_dbi},
          {"rx_gain_dbi", c.rx_gain_dbi},
          {"distance_m", c.distance_m},
          {"carrier_hz", c.carrier_hz}};
}

void apply_json(const Json& j, ChannelConfig& c) {
  Fields f(j, "channel config", {"tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "distance_m", "carrier_hz"});
  f.get("tx_power_dbm", c.tx_power_dbm);
  f.get("tx_gain_dbi", c.tx_gain_dbi);
  f.get("rx_gain_dbi", c.rx_gain_dbi);
  f.get("distance_m", c.distance_m);
  f.get("carrier_hz", c.carrier_hz);
}

Json to_json(const ExperimentPlan& p) {
  return {{"name", p.name},
          {"sensor", to_json(p.sensor)},
          {"channel", to_json(p.channel)},
          {"axis", to_string(p.axis)},
          {"start", p.start},
          {"stop", p.stop},
          {"step", p.step},
          {"values", p.values},
          {"gains", p.gains},
          {"legitimate_frames", p.legitimate_frames},
          {"malicious_frames", p.malicious_frames},
          {"source", to_string(p.source)},
          {"tone_hz", p.tone_hz},
          {"amplitude_scale", p.amplitude_scale},
          {"scene", to_string(p.scene)},
          {"scene_level", p.scene_level},
          {"seed", p.seed}};
}

void apply_json(const Json& j, ExperimentPlan& p) {
  Fields f(j, "sweep plan",
           {"name", "sensor", "channel", "axis", "start", "stop", "step", "values", "gains",
            "legitimate_frames", "malicious_frames", "source", "tone_hz", "amplitude_scale", "scene",
            "scene_level", "seed"});
  f.get("name", p.name);
  f.get_object("sensor", p.sensor);
  f.get_object("channel", p.channel);
  f.get_enum("axis", p.axis, parse_sweep_axis);
  f.get("start", p.start);
  f.get("stop", p.stop);
  f.get("step", p.step);
  f.get("values", p.values);
  f.get("gains", p.gains);
  f.get("legitimate_frames", p.legitimate_frames);
  f.get("malicious_frames", p.malicious_frames);
  f.get_enum("source", p.source, parse_signal_source);
  f.get("tone_hz", p.tone_hz);
  f.get("amplitude_scale", p.amplitude_scale);
  f.get_enum("scene", p.scene, parse_scene_kind);
  f.get("scene_level", p.scene_level);
  f.get("seed", p.seed);
}

Json to_json(const InjectionPlan& p) {
  return {{"sensor", to_json(p.sensor)},
          {"channel", to_json(p.channel)},
          {"frames", p.frames},
          {"noise_free", p.noise_free},
          {"forced_offset", p.forced_offset ? Json(*p.forced_offset) : Json(nullptr)},
          {"rate_mismatch", p.rate_mismatch},
          {"scene", to_string(p.scene)},
          {"scene_level", p.scene_level},
          {"seed", p.seed}};
}

void apply_json(const Json& j, InjectionPlan& p) {
  Fields f(j, "injection plan",
           {"sensor", "channel", "frames", "noise_free", "forced_offset", "rate_mismatch", "scene",
            "scene_level", "seed"});
  f.get_object("sensor", p.sensor);
  f.get_object("channel", p.channel);
  f.get("frames", p.frames);
  f.get("noise_free", p.noise_free);
  if (j.contains("forced_offset")) {
    if (j.at("forced_offset").is_null()) {
      p.forced_offset.reset();
    } else {
      double v = 0.0;
      f.get("forced_offset", v);
      p.forced_offset = v;
    }
  }
  f.get("rate_mismatch", p.rate_mismatch);
  f.get_enum("scene", p.scene, parse_scene_kind);
  f.get("scene_level", p.scene_level);
  f.get("seed", p.seed);
}

Json to_json(const DecoderOptions& d) {
  return {{"scanlines", d.scanlines},
          {"threshold_window", d.threshold_window},
          {"threshold_offset", d.threshold_offset},
          {"max_digit_distance", d.max_digit_distance},
          {"min_quiet_modules", d.min_quiet_modules},
          {"guard_tolerance", d.guard_tolerance}};
}

void apply_json(const Json& j, DecoderOptions& d) {
  Fields f(j, "decoder options",
           {"scanlines", "threshold_window", "threshold_offset", "max_digit_distance",
            "min_quiet_modules", "guard_tolerance"});
  f.get("scanlines", d.scanlines);
  f.get("threshold_window", d.threshold_window);
  f.get("threshold_offset", d.threshold_offset);
  f.get("max_digit_distance", d.max_digit_distance);
  f.get("min_quiet_modules", d.min_quiet_modules);
  f.get("guard_tolerance", d.guard_tolerance);
}

Json to_json(const BarcodePlan& p) {
  return {{"sensor", to_json(p.sensor)},
          {"channel", to_json(p.channel)},
          {"exposures_us", p.exposures_us},
          {"gains", p.gains},
          {"frames_per_condition", p.frames_per_condition},
          {"illumination", p.illumination},
          {"payloads", p.payloads},
          {"module_px", p.module_px},
          {"noise_mean", p.noise_mean},
          {"noise_sigma", p.noise_sigma},
          {"decoder", to_json(p.decoder)},
          {"seed", p.seed}};
}

void apply_json(const Json& j, BarcodePlan& p) {
  Fields f(j, "barcode plan",
           {"sensor", "channel", "exposures_us", "gains", "frames_per_condition", "illumination",
            "payloads", "module_px", "noise_mean", "noise_sigma", "decoder", "seed"});
  f.get_object("sensor", p.sensor);
  f.get_object("channel", p.channel);
  f.get("exposures_us", p.exposures_us);
  f.get("gains", p.gains);
  f.get("frames_per_condition", p.frames_per_condition);
  f.get("illumination", p.illumination);
  f.get("payloads", p.payloads);
  f.get("module_px", p.module_px);
  f.get("noise_mean", p.noise_mean);
  f.get("noise_sigma", p.noise_sigma);
  f.get_object("decoder", p.decoder);
  f.get("seed", p.seed);
}

Json to_json(const DetectorPlan& p) {
  return {{"sensor", to_json(p.sensor)},
          {"channel", to_json(p.channel)},
          {"stream_frames", p.stream_frames},
          {"probe_probability", p.probe_probability},
          {"min_exposure_us", p.min_exposure_us},
          {"threshold_dn", p.threshold_dn},
          {"ambient", p.ambient},
          {"scene", to_string(p.scene)},
          {"scene_level", p.scene_level},
          {"source", to_string(p.source)},
          {"tone_hz", p.tone_hz},
          {"seed", p.seed}};
}

void apply_json(const Json& j, DetectorPlan& p) {
  Fields f(j, "detector plan",
           {"sensor", "channel", "stream_frames", "probe_probability", "min_exposure_us",
            "threshold_dn", "ambient", "scene", "scene_level", "source", "tone_hz", "seed"});
  f.get_object("sensor", p.sensor);
  f.get_object("channel", p.channel);
  f.get("stream_frames", p.stream_frames);
  f.get("probe_probability", p.probe_probability);
  f.get("min_exposure_us", p.min_exposure_us);
  f.get("threshold_dn", p.threshold_dn);
  f.get("ambient", p.ambient);
  f.get_enum("scene", p.scene, parse_scene_kind);
  f.get("scene_level", p.scene_level);
  f.get_enum("source", p.source, parse_signal_source);
  f.get("tone_hz", p.tone_hz);
  f.get("seed", p.seed);
}

Json to_json(const IqSidecar& s) {
  return {{"sample_rate", s.sample_rate},
          {"carrier_hz", s.carrier_hz},
          {"symbol_rate", s.symbol_rate},
          {"f_offset", s.f_offset},
          {"length", s.length},
          {"format", "cf32_le"}};
}

void apply_json(const Json& j, IqSidecar& s) {
  Fields f(j, "IQ sidecar", {"sample_rate", "carrier_hz", "symbol_rate", "f_offset", "length", "format"});
  std::string format = "cf32_le";
  f.get("format", format);
  if (format != "cf32_le") throw InvalidInput("unsupported IQ format " + format);
  f.get("sample_rate", s.sample_rate);
  f.get("carrier_hz", s.carrier_hz);
  f.get("symbol_rate", s.symbol_rate);
  f.get("f_offset", s.f_offset);
  f.get("length", s.length);
}

}  // namespace ccdsim::io
