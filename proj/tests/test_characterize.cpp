#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hompol/characterize.hpp"
#include "hompol/grid.hpp"

using namespace hompol;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<PolarizerSample> noiseless(double phase, int n = 37) {
  std::vector<PolarizerSample> out;
  for (double phi : linspace(0.0, pi / 2, n)) out.push_back({phi, crossed_polarizer_intensity(phi, phase)});
  return out;
}

} // namespace

TEST(CrossedPolarizer, Values) {
  EXPECT_EQ(crossed_polarizer_intensity(pi / 4, pi / 4), 0.5);
  for (double phase : {0.0, 0.3, 1.0}) EXPECT_EQ(crossed_polarizer_intensity(0.0, phase), 0.0);
  for (double phi : {0.0, 0.3, 1.0}) EXPECT_EQ(crossed_polarizer_intensity(phi, 0.0), 0.0);
}

TEST(CrossedPolarizer, BoundsAndMaximum) {
  for (double phase = -4.0; phase <= 4.0; phase += 0.05) {
    double hi = 0.0;
    for (double phi = 0.0; phi <= pi; phi += pi / 400) {
      const double r = crossed_polarizer_intensity(phi, phase);
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
      hi = std::max(hi, r);
    }
    EXPECT_NEAR(hi, std::pow(std::sin(phase), 2), 1e-12); // phi = pi/4 is on the grid
  }
}

TEST(CanonicalPhase, Branch) {
  EXPECT_NEAR(canonical_phase(pi - 0.3), 0.3, 1e-15);
  EXPECT_NEAR(canonical_phase(pi + 0.3), 0.3, 1e-15);
  EXPECT_NEAR(canonical_phase(-0.3), 0.3, 1e-15);
  EXPECT_NEAR(canonical_phase(pi / 4 + 3 * pi), pi / 4, 1e-14);
  EXPECT_EQ(canonical_phase(0.0), 0.0);
}

TEST(EstimatePhase, NoiselessQuarterPi) {
  EXPECT_NEAR(estimate_phase(noiseless(pi / 4)).phase, pi / 4, 1e-9);
}

TEST(EstimatePhase, NoiselessPointThree) {
  const auto est = estimate_phase(noiseless(0.3));
  EXPECT_NEAR(est.phase, 0.3, 1e-9);
  EXPECT_LT(est.residual, 1e-12);
}

TEST(EstimatePhase, ReflectedPhaseGivesCanonical) {
  const auto a = estimate_phase(noiseless(0.3));
  const auto b = estimate_phase(noiseless(pi - 0.3));
  EXPECT_NEAR(a.phase, b.phase, 1e-12);
  EXPECT_NEAR(b.phase, 0.3, 1e-9);
}

TEST(EstimatePhase, EdgesOfBranch) {
  EXPECT_NEAR(estimate_phase(noiseless(0.0)).phase, 0.0, 1e-6);
  EXPECT_NEAR(estimate_phase(noiseless(pi / 2)).phase, pi / 2, 1e-6);
}

TEST(EstimatePhase, NoisyMonteCarlo) {
  std::vector<double> errors;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto samples = noiseless(0.3);
    for (auto& s : samples) s.ratio = std::clamp(s.ratio + noise(rng), 0.0, 1.0);
    errors.push_back(std::abs(estimate_phase(samples).phase - 0.3));
  }
  std::sort(errors.begin(), errors.end());
  EXPECT_LE(errors[94], 0.02);
}

TEST(EstimatePhaseProperty, NoiselessRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2 * pi, 2 * pi);
  for (int i = 0; i < 100; ++i) {
    const double phase = u(rng);
    EXPECT_NEAR(estimate_phase(noiseless(phase)).phase, canonical_phase(phase), 1e-6) << phase;
  }
}

TEST(EstimatePhase, FewerThanThreeSamples) {
  const std::vector<PolarizerSample> two{{0.1, 0.0}, {0.2, 0.0}};
  EXPECT_THROW(estimate_phase(two), InputError);
  const std::vector<PolarizerSample> repeated{{0.1, 0.0}, {0.1, 0.0}, {0.2, 0.0}};
  EXPECT_THROW(estimate_phase(repeated), InputError);
}

TEST(EstimatePhase, DegenerateAnglesUnidentifiable) {
  const std::vector<PolarizerSample> s{{0.0, 0.0}, {pi / 2, 0.0}, {pi, 0.0}, {-pi / 2, 0.0}};
  EXPECT_THROW(estimate_phase(s), UnidentifiableError);
}

TEST(EstimatePhase, RatioOutOfRange) {
  const std::vector<PolarizerSample> s{{0.1, 0.0}, {0.4, 1.2}, {0.7, 0.1}};
  EXPECT_THROW(estimate_phase(s), InputError);
}

TEST(CrossedPolarizer, MatchesDirectTrigonometry) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double phi = u(rng), phase = u(rng);
    const double direct = std::pow(std::sin(2 * phi) * std::sin(phase), 2);
    EXPECT_NEAR(crossed_polarizer_intensity(phi, phase), direct, 1e-14);
  }
}

TEST(CosPi, ExactAtHalfIntegers) {
  EXPECT_EQ(detail::cos_pi(0.0), 1.0);
  EXPECT_EQ(detail::cos_pi(0.5), 0.0);
  EXPECT_EQ(detail::cos_pi(1.0), -1.0);
  EXPECT_EQ(detail::cos_pi(-1.5), 0.0);
  EXPECT_EQ(detail::cos_pi(7.0), -1.0);
  EXPECT_NEAR(detail::cos_pi(0.25), std::sqrt(0.5), 1e-16);
}
