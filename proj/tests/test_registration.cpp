#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccdsim/image.hpp"
#include "ccdsim/registration.hpp"

using namespace ccdsim;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST(Registration, CorrelationMatchesBruteForce) {
  for (std::size_t n : {1u, 2u, 7u, 64u, 101u}) {
    const auto a = random_signal(n, n);
    const auto b = random_signal(n, n + 100);
    const auto c = circular_cross_correlation(a, b);
    ASSERT_EQ(c.size(), n);
    for (std::size_t s = 0; s < n; ++s) {
      double want = 0.0;
      for (std::size_t k = 0; k < n; ++k) want += a[k] * b[(k + s) % n];
      EXPECT_NEAR(c[s], want, 1e-9 * (1.0 + std::abs(want)));
    }
  }
  EXPECT_THROW(circular_cross_correlation(std::vector<double>(3), std::vector<double>(4)), InvalidInput);
}

TEST(Registration, RecoversCircularShift) {
  const std::size_t n = 5000;
  const auto ref = random_signal(n, 1);
  for (std::size_t lag : {0u, 1u, 17u, 2500u, 4999u}) {
    std::vector<double> obs(n);
    for (std::size_t k = 0; k < n; ++k) obs[k] = 3.0 * ref[(k + n - lag) % n] + 10.0;
    const auto peak = ncc_peak(ref, obs);
    EXPECT_EQ(peak.lag, lag);
    EXPECT_NEAR(peak.ncc, 1.0, 1e-9);
  }
}

TEST(Registration, NoisyShiftLowersNcc) {
  const std::size_t n = 4096;
  const auto ref = random_signal(n, 2);
  const auto noise = random_signal(n, 3);
  std::vector<double> obs(n);
  for (std::size_t k = 0; k < n; ++k) obs[k] = ref[(k + n - 300) % n] + noise[k];
  const auto peak = ncc_peak(ref, obs);
  EXPECT_EQ(peak.lag, 300u);
  // Correlation of X with X + N for unit-variance X, N is 1/sqrt(2).
  EXPECT_NEAR(peak.ncc, 1.0 / std::sqrt(2.0), 0.03);
}

TEST(Registration, ConstantInputGivesZero) {
  const auto ref = random_signal(100, 4);
  EXPECT_EQ(ncc_peak(ref, std::vector<double>(100, 2.0)).ncc, 0.0);
  EXPECT_EQ(ncc_peak(std::vector<double>(100, 0.0), ref).ncc, 0.0);
}

TEST(Registration, SignedLag) {
  EXPECT_EQ(signed_lag(0, 10), 0.0);
  EXPECT_EQ(signed_lag(3, 10), 3.0);
  EXPECT_EQ(signed_lag(5, 10), 5.0);
  EXPECT_EQ(signed_lag(6, 10), -4.0);
  EXPECT_EQ(signed_lag(9, 10), -1.0);
  EXPECT_EQ(signed_lag(4, 9), 4.0);
  EXPECT_EQ(signed_lag(5, 9), -4.0);
}
