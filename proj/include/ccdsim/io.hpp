#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccdsim/attack.hpp"
#include "ccdsim/coupling.hpp"
#include "ccdsim/experiments.hpp"
#include "ccdsim/image.hpp"
#include "ccdsim/sensor.hpp"

namespace ccdsim::io {

using Json = nlohmann::json;

/// Failure reading or writing a file; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------------------
// Netpbm images. Samples wider than 8 bits are stored big-endian with a matching maxval.
// ---------------------------------------------------------------------------------------

void write_ppm(const std::filesystem::path& path, const RgbFrame& frame);
RgbFrame read_ppm(const std::filesystem::path& path);

/// Raw sensor samples over the full grid as a grayscale PGM.
void write_pgm(const std::filesystem::path& path, const RawFrame& raw);
RawFrame read_pgm(const std::filesystem::path& path);

/// Attack source images: P6 (RGB) or P7 with TUPLTYPE RGB / RGB_ALPHA, 8 bits per sample.
SourceImage read_source_image(const std::filesystem::path& path);
void write_source_image(const std::filesystem::path& path, const SourceImage& image);

// ---------------------------------------------------------------------------------------
// IQ export: interleaved little-endian float32 (I, Q) pairs plus a JSON sidecar.
// ---------------------------------------------------------------------------------------

struct IqSidecar {
  double sample_rate = 0.0;
  double carrier_hz = 0.0;
  double symbol_rate = 0.0;
  double f_offset = 0.0;
  std::size_t length = 0;  // complex samples

  bool operator==(const IqSidecar&) const = default;
};

void write_iq(const std::filesystem::path& path, const std::vector<std::complex<float>>& iq);
std::vector<std::complex<float>> read_iq(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const IqSidecar& sidecar);
IqSidecar read_sidecar(const std::filesystem::path& path);

/// "index,value" rows with round-trip precision.
void write_envelope_csv(const std::filesystem::path& path, const std::vector<double>& envelope);
std::vector<double> read_envelope_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------------------
// JSON configuration. Loading applies the keys present on top of the given value and
// rejects unknown keys, so a partial file overrides only what it names.
// ---------------------------------------------------------------------------------------

Json to_json(const SusceptibilityProfile& p);
Json to_json(const SensorConfig& c);
Json to_json(const ChannelConfig& c);
Json to_json(const DecoderOptions& d);
Json to_json(const ExperimentPlan& p);
Json to_json(const InjectionPlan& p);
Json to_json(const BarcodePlan& p);
Json to_json(const DetectorPlan& p);
Json to_json(const IqSidecar& s);

void apply_json(const Json& j, SusceptibilityProfile& p);
void apply_json(const Json& j, SensorConfig& c);
void apply_json(const Json& j, ChannelConfig& c);
void apply_json(const Json& j, DecoderOptions& d);
void apply_json(const Json& j, ExperimentPlan& p);
void apply_json(const Json& j, InjectionPlan& p);
void apply_json(const Json& j, BarcodePlan& p);
void apply_json(const Json& j, DetectorPlan& p);
void apply_json(const Json& j, IqSidecar& s);

Json read_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------------------
// Plain files
// ---------------------------------------------------------------------------------------

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so readers never see a torn file.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace ccdsim::io
