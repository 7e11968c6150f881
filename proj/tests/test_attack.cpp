#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ccdsim/attack.hpp"
#include "ccdsim/image.hpp"

using namespace ccdsim;

namespace {

SourceImage solid(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  SourceImage img{w, h, 3, {}};
  for (std::size_t i = 0; i < w * h; ++i) img.pixels.insert(img.pixels.end(), {r, g, b});
  return img;
}

}  // namespace

TEST(ExtractLuminance, PrimaryColours) {
  EXPECT_DOUBLE_EQ(extract_luminance(solid(1, 1, 255, 255, 255), 1, 1)[0], 1.0);
  EXPECT_DOUBLE_EQ(extract_luminance(solid(1, 1, 0, 0, 0), 1, 1)[0], 0.0);
  EXPECT_NEAR(extract_luminance(solid(1, 1, 255, 0, 0), 1, 1)[0], 0.2126, 1e-15);
  EXPECT_NEAR(extract_luminance(solid(1, 1, 0, 255, 0), 1, 1)[0], 0.7152, 1e-15);
  EXPECT_NEAR(extract_luminance(solid(1, 1, 0, 0, 255), 1, 1)[0], 0.0722, 1e-15);
}

TEST(ExtractLuminance, PadsOutsideFootprintInReadoutOrder) {
  SourceImage img = solid(2, 1, 255, 255, 255);
  img.pixels[3] = img.pixels[4] = img.pixels[5] = 0;
  const auto env = extract_luminance(img, 3, 2);
  ASSERT_EQ(env.size(), 6u);
  EXPECT_NEAR(env[0], 1.0, 1e-15);
  for (std::size_t k = 1; k < env.size(); ++k) EXPECT_EQ(env[k], 0.0);
}

TEST(ExtractLuminance, AlphaScalesLinearly) {
  SourceImage img{3, 1, 4, {255, 255, 255, 0, 255, 255, 255, 255, 255, 255, 255, 51}};
  const auto env = extract_luminance(img, 3, 1);
  EXPECT_DOUBLE_EQ(env[0], 0.0);
  EXPECT_DOUBLE_EQ(env[1], 1.0);
  EXPECT_NEAR(env[2], 0.2, 1e-15);
}

TEST(ExtractLuminance, RejectsOversizedImages) {
  EXPECT_THROW(extract_luminance(solid(4, 2, 1, 2, 3), 3, 2), InvalidInput);
  EXPECT_THROW(extract_luminance(solid(3, 3, 1, 2, 3), 3, 2), InvalidInput);
  SourceImage bad{2, 2, 3, {1, 2, 3}};
  EXPECT_THROW(extract_luminance(bad, 4, 4), InvalidInput);
}

TEST(ExtractLuminance, MatchesLongDoubleOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  SourceImage img{17, 9, 4, {}};
  for (std::size_t i = 0; i < 17 * 9 * 4; ++i) img.pixels.push_back(static_cast<std::uint8_t>(byte(rng)));
  const auto env = extract_luminance(img, 20, 11);
  for (std::size_t y = 0; y < 11; ++y) {
    for (std::size_t x = 0; x < 20; ++x) {
      long double want = 0.0L;
      if (x < 17 && y < 9) {
        const std::uint8_t* p = &img.pixels[(y * 17 + x) * 4];
        want = (0.2126L * p[0] + 0.7152L * p[1] + 0.0722L * p[2]) / 255.0L * (p[3] / 255.0L);
      }
      EXPECT_NEAR(env[y * 20 + x], static_cast<double>(want), 1e-15);
    }
  }
}

TEST(SampleRate, Products) {
  EXPECT_DOUBLE_EQ(required_sample_rate(1000, 800, 30), 24'000'000.0);
  EXPECT_DOUBLE_EQ(required_sample_rate(1, 1, 1), 1.0);
  EXPECT_THROW(required_sample_rate(0, 1, 1), InvalidInput);
}

TEST(Resample, IdentityAndConstant) {
  const std::vector<double> env = {0.1, 0.7, 0.3, 1.0};
  EXPECT_EQ(resample(env, 5.0, 5.0), env);
  const std::vector<double> flat(13, 0.4);
  for (auto [from, to] : {std::pair{3.0, 7.0}, {7.0, 3.0}, {25e6, 36e6}}) {
    for (double v : resample(flat, from, to)) EXPECT_DOUBLE_EQ(v, 0.4);
  }
}

TEST(Resample, TwoTimesUpsampleRamp) {
  EXPECT_EQ(resample(std::vector<double>{0.0, 1.0}, 1.0, 2.0), (std::vector<double>{0.0, 0.5, 1.0, 1.0}));
}

TEST(Resample, LengthIsCeil) {
  const std::vector<double> env(10, 0.5);
  EXPECT_EQ(resample(env, 3.0, 2.0).size(), 7u);
  EXPECT_EQ(resample(env, 36e6, 25e6).size(), 7u);
  EXPECT_EQ(resample(env, 1.0, 3.0).size(), 30u);
  EXPECT_THROW(resample(env, 0.0, 1.0), InvalidInput);
}

TEST(Resample, StaysInRange) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> env(101);
  for (double& v : env) v = u(rng);
  for (double v : resample(env, 36e6, 25e6)) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Modulate, ZeroOrderHold) {
  for (auto s : modulate(std::vector<double>(5, 0.0), 1.0, 190e6, 4.0)) EXPECT_EQ(s, std::complex<float>(0, 0));
  for (auto s : modulate(std::vector<double>(5, 1.0), 1.0, 190e6, 4.0)) EXPECT_EQ(s, std::complex<float>(1, 0));
  const auto iq = modulate(std::vector<double>{0.5}, 1.0, 190e6, 4.0);
  ASSERT_EQ(iq.size(), 4u);
  for (auto s : iq) EXPECT_EQ(s, std::complex<float>(0.5f, 0.0f));
}

TEST(Modulate, FrequencyOffsetRotates) {
  const auto iq = modulate(std::vector<double>{1.0}, 1.0, 190e6, 4.0, 1.0);
  ASSERT_EQ(iq.size(), 4u);
  for (std::size_t n = 0; n < iq.size(); ++n) {
    EXPECT_NEAR(std::abs(iq[n]), 1.0, 1e-6);
    EXPECT_NEAR(std::arg(iq[n] * std::polar(1.0f, -static_cast<float>(M_PI / 2 * n))), 0.0, 1e-5);
  }
}

TEST(Modulate, RejectsBadRates) {
  EXPECT_THROW(modulate(std::vector<double>{0.5}, 0.0, 190e6, 4.0), InvalidInput);
  EXPECT_THROW(modulate(std::vector<double>{0.5}, 1.0, 190e6, 0.0), InvalidInput);
  EXPECT_THROW(modulate(std::vector<double>{1.5}, 1.0, 190e6, 4.0), InvalidInput);
  EXPECT_THROW(modulate(std::vector<double>{0.5}, 4.0, 190e6, 4.0, 1.0), InvalidInput);
}

TEST(GaussianNoise, DeterministicAndClamped) {
  EXPECT_EQ(gaussian_noise_signal(1000, 5), gaussian_noise_signal(1000, 5));
  EXPECT_NE(gaussian_noise_signal(1000, 5), gaussian_noise_signal(1000, 6));
  for (double v : gaussian_noise_signal(0 + 1000, 9, 0.5, 2.0)) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  for (double v : gaussian_noise_signal(100, 1, 0.5, 0.0)) EXPECT_EQ(v, 0.5);
  EXPECT_THROW(gaussian_noise_signal(0, 1), InvalidInput);
}

TEST(GaussianNoise, MeanMatchesClampedNormalOracle) {
  // E[clamp(X,0,1)] for X ~ N(mu, sigma), integrated by the trapezoid rule.
  const double mu = 0.5, sigma = 0.25;
  auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double inner = 0.0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double x0 = static_cast<double>(i) / steps, x1 = static_cast<double>(i + 1) / steps;
    auto pdf = [&](double x) {
      const double z = (x - mu) / sigma;
      return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
    };
    inner += 0.5 * (x0 * pdf(x0) + x1 * pdf(x1)) * (x1 - x0);
  }
  const double expected = inner + (1.0 - phi((1.0 - mu) / sigma));
  const auto env = gaussian_noise_signal(1'000'000, 42);
  const double mean = std::accumulate(env.begin(), env.end(), 0.0) / static_cast<double>(env.size());
  EXPECT_NEAR(mean, expected, 1e-3);
  EXPECT_NEAR(mean, 0.51, 0.02);
}

TEST(SineSignal, IntegerPeriod) {
  const AttackSignal s = sine_signal(1000.0, 2'580'480.0, 190e6);
  EXPECT_EQ(s.envelope.size(), 2580u);
  EXPECT_DOUBLE_EQ(s.symbol_rate, 2'580'000.0);
  EXPECT_DOUBLE_EQ(s.envelope[0], 0.5);
  EXPECT_NEAR(s.envelope[645], 1.0, 1e-12);
  EXPECT_NEAR(s.envelope[1935], 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.carrier_hz, 190e6);
}
