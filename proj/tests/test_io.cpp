#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ccdsim/io.hpp"

using namespace ccdsim;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ccdsim_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

RgbFrame random_frame(std::size_t w, std::size_t h, int bits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RgbFrame f(w, h, bits);
  std::uniform_int_distribution<int> u(0, f.max_value());
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      for (int ch = 0; ch < 3; ++ch) f.at(r, c, ch) = static_cast<std::uint16_t>(u(rng));
    }
  }
  return f;
}

}  // namespace

TEST_F(IoTest, PpmRoundTrip) {
  for (int bits : {8, 10, 16}) {
    const auto f = random_frame(13, 7, bits, static_cast<std::uint64_t>(bits));
    io::write_ppm(dir_ / "f.ppm", f);
    EXPECT_EQ(io::read_ppm(dir_ / "f.ppm"), f) << bits;
  }
}

TEST_F(IoTest, PpmHeader) {
  io::write_ppm(dir_ / "f.ppm", random_frame(4, 3, 8, 1));
  const auto text = io::read_text(dir_ / "f.ppm");
  EXPECT_EQ(text.substr(0, 11), "P6\n4 3\n255\n");
  EXPECT_EQ(text.size(), 11u + 36u);
}

TEST_F(IoTest, PgmRoundTrip) {
  RawFrame raw{Plane<std::uint16_t>(5, 4), 12};
  for (std::size_t k = 0; k < raw.values.size(); ++k) raw.values[k] = static_cast<std::uint16_t>(k * 201 % 4096);
  io::write_pgm(dir_ / "r.pgm", raw);
  EXPECT_EQ(io::read_pgm(dir_ / "r.pgm"), raw);
}

TEST_F(IoTest, TruncatedImageRejected) {
  io::write_ppm(dir_ / "f.ppm", random_frame(4, 3, 8, 1));
  auto text = io::read_text(dir_ / "f.ppm");
  text.pop_back();
  io::write_text(dir_ / "f.ppm", text);
  EXPECT_THROW(io::read_ppm(dir_ / "f.ppm"), io::IoError);
  EXPECT_THROW(io::read_ppm(dir_ / "missing.ppm"), io::IoError);
}

TEST_F(IoTest, SourceImageRgbAndRgba) {
  SourceImage rgb{3, 2, 3, {}};
  SourceImage rgba{3, 2, 4, {}};
  for (int i = 0; i < 18; ++i) rgb.pixels.push_back(static_cast<std::uint8_t>(i * 13));
  for (int i = 0; i < 24; ++i) rgba.pixels.push_back(static_cast<std::uint8_t>(i * 11));
  for (const auto& img : {rgb, rgba}) {
    io::write_source_image(dir_ / "s.pam", img);
    const auto back = io::read_source_image(dir_ / "s.pam");
    EXPECT_EQ(back.width, img.width);
    EXPECT_EQ(back.height, img.height);
    EXPECT_EQ(back.channels, img.channels);
    EXPECT_EQ(back.pixels, img.pixels);
  }
  // Plain P6 is accepted as a source too.
  io::write_ppm(dir_ / "f.ppm", random_frame(4, 3, 8, 2));
  EXPECT_EQ(io::read_source_image(dir_ / "f.ppm").channels, 3);
}

TEST_F(IoTest, IqAndSidecar) {
  std::vector<std::complex<float>> iq = {{0.5f, -0.25f}, {1.0f, 0.0f}, {-1.0f, 0.125f}};
  io::write_iq(dir_ / "a.iq", iq);
  EXPECT_EQ(fs::file_size(dir_ / "a.iq"), 24u);
  EXPECT_EQ(io::read_iq(dir_ / "a.iq"), iq);
  const auto bytes = io::read_text(dir_ / "a.iq");
  // 0.5f little-endian.
  EXPECT_EQ(static_cast<unsigned char>(bytes[3]), 0x3f);
  EXPECT_EQ(static_cast<unsigned char>(bytes[2]), 0x00);

  io::IqSidecar side{25e6, 190e6, 24e6, 0.0, 3};
  io::write_sidecar(dir_ / "a.json", side);
  EXPECT_EQ(io::read_sidecar(dir_ / "a.json"), side);
  auto j = io::read_json(dir_ / "a.json");
  for (const char* k : {"sample_rate", "carrier_hz", "symbol_rate", "length"}) EXPECT_TRUE(j.contains(k)) << k;
  j["format"] = "cs16";
  io::write_text(dir_ / "b.json", j.dump());
  EXPECT_THROW(io::read_sidecar(dir_ / "b.json"), InvalidInput);
}

TEST_F(IoTest, EnvelopeCsvRoundTrip) {
  const std::vector<double> env = {0.0, 0.1, 1.0 / 3.0, 1.0};
  io::write_envelope_csv(dir_ / "e.csv", env);
  EXPECT_EQ(io::read_envelope_csv(dir_ / "e.csv"), env);
  EXPECT_EQ(io::read_text(dir_ / "e.csv").substr(0, 12), "index,value\n");
}

TEST_F(IoTest, WriteTextCreatesParents) {
  io::write_text(dir_ / "a" / "b" / "c.txt", "hello");
  EXPECT_EQ(io::read_text(dir_ / "a" / "b" / "c.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir_ / "a" / "b" / "c.txt.tmp"));
}

TEST(JsonConfig, SensorRoundTrip) {
  SensorConfig c;
  c.name = "x";
  c.architecture = Architecture::kCmos;
  c.cfa = Cfa::kGBRG;
  c.readout_rate = 36e6;
  c.gain_index = 17;
  c.susceptibility.bandwidth_hz = 8e6;
  SensorConfig back;
  io::apply_json(io::to_json(c), back);
  EXPECT_EQ(io::to_json(back), io::to_json(c));
  EXPECT_EQ(back.readout_rate, std::optional<double>(36e6));

  io::Json j = io::to_json(SensorConfig{});
  EXPECT_TRUE(j["readout_rate"].is_null());
  SensorConfig d;
  io::apply_json(j, d);
  EXPECT_FALSE(d.readout_rate.has_value());
}

TEST(JsonConfig, PartialOverride) {
  SensorConfig c;
  io::apply_json(io::Json::parse(R"({"gain_index": 9, "susceptibility": {"resonant_hz": 341e6}})"), c);
  EXPECT_EQ(c.gain_index, 9);
  EXPECT_EQ(c.susceptibility.resonant_hz, 341e6);
  EXPECT_EQ(c.susceptibility.bandwidth_hz, SusceptibilityProfile{}.bandwidth_hz);
  EXPECT_EQ(c.cols_total, SensorConfig{}.cols_total);
}

TEST(JsonConfig, RejectsUnknownKeysAndBadTypes) {
  SensorConfig c;
  EXPECT_THROW(io::apply_json(io::Json::parse(R"({"gian_index": 9})"), c), InvalidInput);
  EXPECT_THROW(io::apply_json(io::Json::parse(R"({"gain_index": "high"})"), c), InvalidInput);
  EXPECT_THROW(io::apply_json(io::Json::parse(R"({"architecture": "tube"})"), c), InvalidInput);
  EXPECT_THROW(io::apply_json(io::Json::parse("[1,2]"), c), InvalidInput);
  ExperimentPlan p;
  EXPECT_THROW(io::apply_json(io::Json::parse(R"({"sensor": {"bogus": 1}})"), p), InvalidInput);
}

TEST(JsonConfig, PlansRoundTrip) {
  ExperimentPlan e = default_power_plan();
  ExperimentPlan e2;
  io::apply_json(io::to_json(e), e2);
  EXPECT_EQ(io::to_json(e2), io::to_json(e));

  InjectionPlan i = default_injection_plan();
  i.forced_offset = 123.0;
  InjectionPlan i2;
  io::apply_json(io::to_json(i), i2);
  EXPECT_EQ(io::to_json(i2), io::to_json(i));

  BarcodePlan b = default_barcode_plan();
  BarcodePlan b2;
  io::apply_json(io::to_json(b), b2);
  EXPECT_EQ(io::to_json(b2), io::to_json(b));

  DetectorPlan d = default_detector_plan();
  DetectorPlan d2;
  io::apply_json(io::to_json(d), d2);
  EXPECT_EQ(io::to_json(d2), io::to_json(d));
}
