#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccdsim/capture.hpp"
#include "ccdsim/metrics.hpp"
#include "ccdsim/sensor.hpp"

using namespace ccdsim;

namespace {

SensorConfig tiny(std::size_t cols, std::size_t rows, std::size_t border = 0) {
  SensorConfig c;
  c.cols_total = cols;
  c.rows_total = rows;
  c.cols_effective = cols - 2 * border;
  c.rows_effective = rows - 2 * border;
  c.border_left = c.border_top = border;
  c.read_noise_sigma = 0.0;
  c.dark_current_rate = 0.0;
  return c;
}

InducedWaveform constant_wave(const SensorConfig& c, double charge) {
  InducedWaveform w;
  w.sample_rate = c.effective_readout_rate();
  w.samples.assign(c.pixel_count(), charge);
  return w;
}

// Bilinear Bayer interpolation written as the usual per-site kernels.
std::vector<double> bilinear_oracle(const Plane<std::uint16_t>& raw, const SensorConfig& c, std::size_t r,
                                    std::size_t col) {
  const long h = static_cast<long>(raw.height()), w = static_cast<long>(raw.width());
  auto at = [&](long y, long x) {
    y = y < 0 ? -y : (y >= h ? 2 * h - 2 - y : y);
    x = x < 0 ? -x : (x >= w ? 2 * w - 2 - x : x);
    return static_cast<double>(raw.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x)));
  };
  const long y = static_cast<long>(r), x = static_cast<long>(col);
  const double cross = (at(y - 1, x) + at(y + 1, x) + at(y, x - 1) + at(y, x + 1)) / 4.0;
  const double diag = (at(y - 1, x - 1) + at(y - 1, x + 1) + at(y + 1, x - 1) + at(y + 1, x + 1)) / 4.0;
  const double horiz = (at(y, x - 1) + at(y, x + 1)) / 2.0;
  const double vert = (at(y - 1, x) + at(y + 1, x)) / 2.0;
  const double self = at(y, x);
  // RGGB: red at (even, even), blue at (odd, odd).
  const bool even_row = r % 2 == 0, even_col = col % 2 == 0;
  if (even_row && even_col) return {self, cross, diag};
  if (!even_row && !even_col) return {diag, cross, self};
  if (even_row) return {horiz, self, vert};
  return {vert, self, horiz};
}

}  // namespace

TEST(SensorConfig, DerivedReadoutRateAndValidation) {
  SensorConfig c;
  EXPECT_DOUBLE_EQ(c.effective_readout_rate(), 336.0 * 256.0 * 30.0);
  EXPECT_DOUBLE_EQ(c.samples_per_frame(), 336.0 * 256.0);
  c.gain_index = 30;
  EXPECT_THROW(c.validate(), InvalidInput);
  c.gain_index = -1;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SensorConfig{};
  c.exposure_us = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SensorConfig{};
  c.adc_bits = 17;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SensorConfig{};
  c.border_left = 17;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(SensorConfig, GainMapping) {
  SensorConfig c;
  EXPECT_DOUBLE_EQ(c.conversion_gain() * c.full_well, 255.0);
  c.gain_index = 29;
  EXPECT_NEAR(c.conversion_gain() * c.full_well / 255.0, std::pow(10.0, 29.0 / 20.0), 1e-12);
  c.gain_index = 6;
  EXPECT_NEAR(c.conversion_gain() * c.full_well / 255.0, 1.9953, 1e-4);
}

TEST(SensorConfig, BayerTileProportions) {
  for (Cfa cfa : {Cfa::kRGGB, Cfa::kBGGR, Cfa::kGRBG, Cfa::kGBRG}) {
    SensorConfig c;
    c.cfa = cfa;
    for (std::size_t r0 = 0; r0 < 4; ++r0) {
      for (std::size_t c0 = 0; c0 < 4; ++c0) {
        int count[3] = {0, 0, 0};
        for (std::size_t dr = 0; dr < 2; ++dr) {
          for (std::size_t dc = 0; dc < 2; ++dc) ++count[c.channel_at(r0 + dr, c0 + dc)];
        }
        EXPECT_EQ(count[kRed], 1);
        EXPECT_EQ(count[kGreen], 2);
        EXPECT_EQ(count[kBlue], 1);
      }
    }
  }
  SensorConfig c;
  EXPECT_EQ(c.channel_at(0, 0), kRed);
  EXPECT_EQ(c.channel_at(0, 1), kGreen);
  EXPECT_EQ(c.channel_at(1, 1), kBlue);
}

TEST(Expose, DarkSceneWithoutNoiseIsZero) {
  SensorConfig c = tiny(8, 6, 1);
  const auto q = expose(Scene(6, 4, 0.0), c, 1);
  for (double v : q.charge.values()) EXPECT_EQ(v, 0.0);
}

TEST(Expose, FullRadianceFillsTheWell) {
  SensorConfig c = tiny(8, 6, 1);
  Scene s(6, 4, 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t col = 0; col < 6; ++col) s.at(r, col, kGreen) = 1.0;
  }
  const auto q = expose(s, c, 1);
  EXPECT_EQ(q.charge.at(1, 2), c.full_well);  // green site in the window
  EXPECT_EQ(q.charge.at(1, 1), 0.0);          // red site
  EXPECT_EQ(q.charge.at(0, 1), 0.0);          // shielded border
  c.exposure_us = 2 * c.reference_exposure_us;
  EXPECT_EQ(expose(s, c, 1).charge.at(1, 2), 2 * c.full_well);
}

TEST(Expose, DarkCurrentScalesWithExposure) {
  SensorConfig c = tiny(420, 320, 10);
  c.dark_current_rate = 0.01;
  const Scene s(400, 300, 0.0);
  auto frame_mean = [&](double exposure) {
    c.exposure_us = exposure;
    const auto q = expose(s, c, 5);
    double sum = 0.0;
    for (double v : q.charge.values()) sum += v;
    return sum / static_cast<double>(q.charge.size());
  };
  const double lo = frame_mean(10.0);
  const double hi = frame_mean(33'000.0);
  EXPECT_NEAR(lo, 0.1, 0.005);
  EXPECT_NEAR(hi, 330.0, 0.5);
  EXPECT_NEAR(hi / lo, 3300.0, 0.05 * 3300.0);
}

TEST(Expose, RejectsSceneSizeMismatch) {
  EXPECT_THROW(expose(Scene(5, 5), tiny(8, 6, 1), 1), InvalidInput);
}

TEST(Readout, FullWellMapsToFullScale) {
  SensorConfig c = tiny(6, 4);
  ChargeFrame q{Plane<double>(6, 4, c.full_well)};
  const auto raw = readout(q, c, nullptr, 1);
  for (auto v : raw.values.values()) EXPECT_EQ(v, 255);
}

TEST(Readout, HalfWellInjectionRoundsHalfUp) {
  SensorConfig c = tiny(6, 4);
  ChargeFrame q{Plane<double>(6, 4, 0.0)};
  const auto w = constant_wave(c, c.full_well / 2);
  const auto raw = readout(q, c, &w, 1);
  for (auto v : raw.values.values()) EXPECT_EQ(v, 128);
}

TEST(Readout, RateMismatchRejected) {
  SensorConfig c = tiny(6, 4);
  ChargeFrame q{Plane<double>(6, 4, 0.0)};
  auto w = constant_wave(c, 1.0);
  w.sample_rate *= 1.01;
  EXPECT_THROW(readout(q, c, &w, 1), InvalidInput);
  w = constant_wave(c, 1.0);
  w.samples.pop_back();
  EXPECT_THROW(readout(q, c, &w, 1), InvalidInput);
}

TEST(Readout, SerializedOrder) {
  SensorConfig c = tiny(4, 3);
  ChargeFrame q{Plane<double>(4, 3, 0.0)};
  InducedWaveform w = constant_wave(c, 0.0);
  for (std::size_t k = 0; k < w.samples.size(); ++k) w.samples[k] = static_cast<double>(k) * 100.0;
  const auto raw = readout(q, c, &w, 1);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t col = 0; col < 4; ++col) {
      const double k = static_cast<double>(r * 4 + col);
      EXPECT_EQ(raw.values.at(r, col), std::floor(k * 100.0 * 255.0 / c.full_well + 0.5));
    }
  }
}

TEST(Readout, GainScalesBothChargeTerms) {
  SensorConfig c = tiny(4, 2);
  c.adc_bits = 16;
  ChargeFrame q{Plane<double>(4, 2, 100.0)};
  const auto w = constant_wave(c, 50.0);
  c.gain_index = 0;
  const double base = readout(q, c, &w, 1).values[0];
  c.gain_db_per_step = 20.0 * std::log10(2.0);
  c.gain_index = 1;
  EXPECT_NEAR(readout(q, c, &w, 1).values[0], 2 * base, 1.0);
}

TEST(Readout, InjectionNeverDarkensAndSaturationHolds) {
  SensorConfig c = tiny(40, 30, 2);
  c.read_noise_sigma = 25.0;
  c.dark_current_rate = 0.01;
  c.adc_noise_dn = 1.5;
  c.gain_index = 12;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scene s(36, 26);
  for (std::size_t r = 0; r < 26; ++r) {
    for (std::size_t col = 0; col < 36; ++col) {
      for (int ch = 0; ch < 3; ++ch) s.at(r, col, ch) = u(rng);
    }
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto q = expose(s, c, seed);
    InducedWaveform w = constant_wave(c, 0.0);
    for (double& v : w.samples) v = 3000.0 * u(rng);
    const auto clean = readout(q, c, nullptr, seed);
    const auto hit = readout(q, c, &w, seed);
    for (std::size_t k = 0; k < c.pixel_count(); ++k) {
      EXPECT_GE(hit.values[k], clean.values[k]);
      if (clean.values[k] == 255) EXPECT_EQ(hit.values[k], 255);
    }
  }
}

TEST(Readout, CmosDefaultIgnoresInjection) {
  SensorConfig c = tiny(10, 8);
  c.architecture = Architecture::kCmos;
  c.read_noise_sigma = 10.0;
  ChargeFrame q{Plane<double>(10, 8, 500.0)};
  const auto w = constant_wave(c, 2000.0);
  EXPECT_EQ(readout(q, c, &w, 3), readout(q, c, nullptr, 3));
  c.cmos_coupling_factor = 0.5;
  EXPECT_NE(readout(q, c, &w, 3), readout(q, c, nullptr, 3));
}

TEST(Readout, Deterministic) {
  SensorConfig c = tiny(10, 8);
  c.read_noise_sigma = 10.0;
  ChargeFrame q{Plane<double>(10, 8, 500.0)};
  EXPECT_EQ(readout(q, c, nullptr, 9), readout(q, c, nullptr, 9));
  EXPECT_NE(readout(q, c, nullptr, 9), readout(q, c, nullptr, 10));
}

TEST(Demosaic, UniformStaysUniform) {
  SensorConfig c = tiny(10, 8, 1);
  RawFrame raw{Plane<std::uint16_t>(10, 8, 77), 8};
  const auto rgb = demosaic(raw, c);
  ASSERT_EQ(rgb.width(), 8u);
  ASSERT_EQ(rgb.height(), 6u);
  for (auto v : rgb.samples()) EXPECT_EQ(v, 77);
}

TEST(Demosaic, SingleRedSiteIsLocalMaximum) {
  SensorConfig c = tiny(10, 10);
  RawFrame raw{Plane<std::uint16_t>(10, 10, 10), 8};
  raw.values.at(4, 4) = 200;
  const auto rgb = demosaic(raw, c);
  EXPECT_EQ(rgb.at(4, 4, kRed), 200);
  EXPECT_LT(rgb.at(4, 4, kGreen), 200);
  EXPECT_LT(rgb.at(4, 4, kBlue), 200);
  for (std::size_t r = 3; r <= 5; ++r) {
    for (std::size_t col = 3; col <= 5; ++col) {
      if (r != 4 || col != 4) EXPECT_LT(rgb.at(r, col, kRed), 200);
    }
  }
}

TEST(Demosaic, MatchesBilinearOracleOnSixBySix) {
  SensorConfig c = tiny(6, 6);
  RawFrame raw{Plane<std::uint16_t>(6, 6), 8};
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t col = 0; col < 6; ++col) {
      // Checkerboard at the Bayer period plus a ramp so every kernel sees distinct values.
      raw.values.at(r, col) = static_cast<std::uint16_t>(((r / 2 + col / 2) % 2 ? 180 : 40) + 3 * r + col);
    }
  }
  const auto rgb = demosaic(raw, c);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t col = 0; col < 6; ++col) {
      const auto want = bilinear_oracle(raw.values, c, r, col);
      for (int ch = 0; ch < 3; ++ch) {
        EXPECT_EQ(rgb.at(r, col, ch), std::floor(want[static_cast<std::size_t>(ch)] + 0.5))
            << r << "," << col << " ch " << ch;
      }
    }
  }
}

TEST(Capture, NoAttackFramesDifferOnlyByNoise) {
  SensorConfig c;
  const Scene s(c.cols_effective, c.rows_effective, 0.3);
  const auto seq = capture_sequence(s, c, nullptr, 3, 4);
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      sum += ssim(seq.frames[i], seq.frames[j]);
      ++n;
    }
  }
  EXPECT_GT(sum / n, 0.95);
  EXPECT_NE(seq.raw[0], seq.raw[1]);
}

TEST(Capture, SharedNoiseAcrossAttackedAndClean) {
  SensorConfig c = tiny(40, 30, 2);
  c.read_noise_sigma = 20.0;
  const Scene s(36, 26, 0.2);
  AttackScenario attack;
  attack.signal = {std::vector<double>(50, 0.0), c.effective_readout_rate(), 190e6};
  const auto clean = capture_sequence(s, c, nullptr, 2, 8);
  const auto hit = capture_sequence(s, c, &attack, 2, 8);
  EXPECT_EQ(clean.raw, hit.raw);
}

TEST(Capture, OffsetWithinOneFrame) {
  SensorConfig c;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const double o = draw_offset(c, seed);
    EXPECT_GE(o, 0.0);
    EXPECT_LT(o, c.samples_per_frame());
  }
  EXPECT_EQ(draw_offset(c, 3), draw_offset(c, 3));
}

TEST(Capture, RejectsZeroFrames) {
  SensorConfig c;
  EXPECT_THROW(capture_sequence(Scene(320, 240), c, nullptr, 0, 1), InvalidInput);
}
