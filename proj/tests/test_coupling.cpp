#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccdsim/coupling.hpp"
#include "ccdsim/image.hpp"

using namespace ccdsim;

namespace {

long double friis_oracle(long double pt, long double gt, long double gr, long double d, long double f) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double lambda = 299792458.0L / f;
  return pt + gt + gr + 20.0L * std::log10(lambda / (4.0L * pi * d));
}

}  // namespace

TEST(Friis, HalfMetreExample) {
  ChannelConfig c{20.1, 3.0, 0.0, 0.5, 190e6};
  EXPECT_NEAR(friis_received_power(c), 11.10, 0.01);
  EXPECT_NEAR(friis_received_power(c), static_cast<double>(friis_oracle(20.1L, 3.0L, 0.0L, 0.5L, 190e6L)), 1e-12);
}

TEST(Friis, UnitRatioDistance) {
  ChannelConfig c{7.5, 2.0, 1.0, 1.0, 190e6};
  c.distance_m = c.wavelength_m() / (4.0 * M_PI);
  EXPECT_NEAR(friis_received_power(c), 10.5, 1e-12);
}

TEST(Friis, DoublingDistanceCostsSixDb) {
  ChannelConfig a{20.1, 3.0, 0.0, 0.1, 300e6};
  ChannelConfig b = a;
  b.distance_m = 0.2;
  EXPECT_NEAR(friis_received_power(a) - friis_received_power(b), 20.0 * std::log10(2.0), 1e-12);
}

TEST(Friis, RandomInputsMatchOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> p(-30, 30), g(-5, 10), d(0.01, 10), f(1e6, 6e9);
  for (int i = 0; i < 1000; ++i) {
    ChannelConfig c{p(rng), g(rng), g(rng), d(rng), f(rng)};
    const auto want = friis_oracle(c.tx_power_dbm, c.tx_gain_dbi, c.rx_gain_dbi, c.distance_m, c.carrier_hz);
    EXPECT_LE(std::abs(friis_received_power(c) - static_cast<double>(want)), 1e-9 * std::max(1.0L, std::abs(want)));
  }
}

TEST(Friis, RejectsBadGeometry) {
  EXPECT_THROW(friis_received_power({20.1, 3, 0, 0.0, 190e6}), InvalidInput);
  EXPECT_THROW(friis_received_power({20.1, 3, 0, -1.0, 190e6}), InvalidInput);
  EXPECT_THROW(friis_received_power({20.1, 3, 0, 0.1, 0.0}), InvalidInput);
}

TEST(Coupling, LorentzianShape) {
  SusceptibilityProfile p{190e6, 60e6, 4.0, 0.5};
  EXPECT_DOUBLE_EQ(coupling_factor(190e6, p), 4.0);
  EXPECT_DOUBLE_EQ(coupling_factor(160e6, p), 0.5 + 3.5 / 2);
  EXPECT_DOUBLE_EQ(coupling_factor(220e6, p), 0.5 + 3.5 / 2);
  EXPECT_NEAR(coupling_factor(190e6 + 100 * 60e6, p), 0.5, 1e-4 * (4.0 - 0.5));
  EXPECT_NEAR(coupling_factor(190e6 - 100 * 60e6, {190e6, 60e6, 1.0, 0.0}), 0.0, 1e-4);
  EXPECT_LT(coupling_factor(189e6, p), 4.0);
  EXPECT_LT(coupling_factor(191e6, p), 4.0);
}

TEST(Coupling, RejectsBadProfile) {
  EXPECT_THROW(coupling_factor(1e8, {190e6, 0.0, 1.0, 0.0}), InvalidInput);
  EXPECT_THROW(coupling_factor(1e8, {190e6, 1e6, 1.0, 2.0}), InvalidInput);
  EXPECT_THROW(coupling_factor(1e8, {190e6, 1e6, 1.0, -1.0}), InvalidInput);
}

TEST(Induce, ZeroEnvelopeGivesZeroCharge) {
  AttackSignal s{std::vector<double>(10, 0.0), 100.0, 190e6};
  const auto w = induce(s, ChannelConfig{}, SusceptibilityProfile{}, 100.0, 0.0, 25, true);
  for (double v : w.samples) EXPECT_EQ(v, 0.0);
}

TEST(Induce, ConstantEnvelopeClosedForm) {
  AttackSignal s{std::vector<double>(10, 1.0), 100.0, 190e6};
  ChannelConfig ch{};
  SusceptibilityProfile prof{190e6, 60e6, 4.0, 0.0};
  const double expected = 4.0 * std::pow(10.0, friis_received_power(ch) / 20.0);
  const auto w = induce(s, ch, prof, 100.0, 0.0, 10);
  EXPECT_EQ(w.sample_rate, 100.0);
  EXPECT_EQ(w.source_rate, 100.0);
  for (double v : w.samples) EXPECT_NEAR(v, expected, 1e-12 * expected);
}

TEST(Induce, TwentyDbIsTenTimes) {
  AttackSignal s{{0.2, 0.9, 0.4}, 100.0, 190e6};
  ChannelConfig lo{};
  ChannelConfig hi = lo;
  hi.tx_power_dbm += 20.0;
  const auto a = induce(s, lo, {}, 100.0, 0.0, 3);
  const auto b = induce(s, hi, {}, 100.0, 0.0, 3);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(b.samples[k], 10.0 * a.samples[k], 1e-12 * b.samples[k]);
}

TEST(Induce, IntegerOffsetIsPureShift) {
  AttackSignal s{{0.1, 0.2, 0.3, 0.4, 0.5}, 10.0, 190e6};
  SusceptibilityProfile prof{190e6, 60e6, 1.0, 0.0};
  ChannelConfig ch{};
  const double amp = induced_amplitude(ch, prof);
  const auto w = induce(s, ch, prof, 10.0, 2.0, 9);
  const std::vector<double> want = {0, 0, 0.1, 0.2, 0.3, 0.4, 0.5, 0, 0};
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(w.samples[k], want[k] * amp, 1e-12);

  const auto looped = induce(s, ch, prof, 10.0, 2.0, 9, true);
  const std::vector<double> lwant = {0.4, 0.5, 0.1, 0.2, 0.3, 0.4, 0.5, 0.1, 0.2};
  for (std::size_t k = 0; k < lwant.size(); ++k) EXPECT_NEAR(looped.samples[k], lwant[k] * amp, 1e-12);
}

TEST(Induce, RateConversionInterpolates) {
  AttackSignal s{{0.0, 1.0}, 1.0, 190e6};
  const double amp = induced_amplitude(ChannelConfig{}, SusceptibilityProfile{});
  const auto w = induce(s, ChannelConfig{}, SusceptibilityProfile{}, 2.0, 0.0, 4);
  EXPECT_NEAR(w.samples[0], 0.0, 1e-12);
  EXPECT_NEAR(w.samples[1], 0.5 * amp, 1e-12);
  EXPECT_NEAR(w.samples[2], amp, 1e-12);
  EXPECT_NEAR(w.samples[3], amp, 1e-12);
}

TEST(Induce, MonotoneInPowerAndDistance) {
  AttackSignal s{{0.7}, 1.0, 190e6};
  double last = 0.0;
  for (double p = -10; p <= 20; p += 2.5) {
    ChannelConfig ch{};
    ch.tx_power_dbm = p;
    const double v = induce(s, ch, {}, 1.0, 0.0, 1).samples[0];
    EXPECT_GT(v, last);
    last = v;
  }
  for (double d = 0.03; d < 2.0; d *= 1.5) {
    ChannelConfig near{}, far{};
    near.distance_m = d;
    far.distance_m = d * 1.5;
    EXPECT_GT(induce(s, near, {}, 1.0, 0.0, 1).samples[0], induce(s, far, {}, 1.0, 0.0, 1).samples[0]);
  }
}

TEST(Induce, RejectsBadArguments) {
  AttackSignal s{{0.5}, 1.0, 190e6};
  EXPECT_THROW(induce(s, {}, {}, 1.0, 0.0, 0), InvalidInput);
  EXPECT_THROW(induce(s, {}, {}, 0.0, 0.0, 1), InvalidInput);
  s.envelope = {1.2};
  EXPECT_THROW(induce(s, {}, {}, 1.0, 0.0, 1), InvalidInput);
}
