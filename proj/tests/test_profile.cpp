#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "edbound/errors.hpp"
#include "edbound/oracle.hpp"
#include "edbound/profile.hpp"

using namespace edbound;

namespace {

StaircaseProfile two_stairs() { return make_staircase({1.0, 2.0}, {2.0, 4.0}); }

}  // namespace

TEST(Profile, MakeStaircaseAcceptsValidInput) {
  const auto p = two_stairs();
  EXPECT_EQ(p.levels(), 2u);
  EXPECT_DOUBLE_EQ(p.noise(1), 0.5);
}

TEST(Profile, MakeStaircaseRejectsInvariantViolations) {
  EXPECT_THROW(make_staircase({1.0, 2.0}, {4.0, 2.0}), RejectError);
  EXPECT_THROW(make_staircase({2.0, 1.0}, {2.0, 4.0}), RejectError);
  EXPECT_THROW(make_staircase({1.0, 2.0}, {2.0}), RejectError);
  EXPECT_THROW(make_staircase({}, {}), RejectError);
  EXPECT_THROW(make_staircase({0.0, 2.0}, {2.0, 4.0}), RejectError);
  EXPECT_THROW(make_staircase({1.0, 2.0}, {1.0, 4.0}), RejectError);
  EXPECT_THROW(make_staircase({1.0, 1.0}, {2.0, 4.0}), RejectError);
  EXPECT_THROW(make_staircase({1.0, std::nan("")}, {2.0, 4.0}), RejectError);
}

TEST(Profile, ExpandGeometric) {
  const auto finite = expand_geometric({2.0, 8.0, 2}, 100);
  EXPECT_EQ(std::vector<double>(finite.q().begin(), finite.q().end()), (std::vector<double>{2, 4}));
  EXPECT_EQ(std::vector<double>(finite.a().begin(), finite.a().end()), (std::vector<double>{8, 64}));

  const auto capped = expand_geometric({2.0, 8.0, std::nullopt}, 3);
  EXPECT_EQ(std::vector<double>(capped.q().begin(), capped.q().end()), (std::vector<double>{2, 4, 8}));
  EXPECT_EQ(std::vector<double>(capped.a().begin(), capped.a().end()), (std::vector<double>{8, 64, 512}));

  EXPECT_THROW(expand_geometric({10.0, 10.0, 400}, 1000), RejectError);
  EXPECT_THROW(expand_geometric({1.0, 8.0, 2}, 10), RejectError);
  EXPECT_THROW(expand_geometric({2.0, 1.0, 2}, 10), RejectError);
}

TEST(Profile, MaxRepresentableLevelsIsTight) {
  const GeometricSpec spec{10.0, 10.0, std::nullopt};
  const auto k = max_representable_levels(spec);
  EXPECT_EQ(k, 308u);
  EXPECT_NO_THROW(expand_geometric(spec, k));
  EXPECT_THROW(expand_geometric(spec, k + 1), RejectError);
}

TEST(Profile, FidelityLookup) {
  const auto p = two_stairs();
  EXPECT_EQ(fidelity_at(p, 1.5), 2.0);
  EXPECT_EQ(fidelity_at(p, 0.5), 1.0);
  EXPECT_EQ(fidelity_at(p, 7.0), 4.0);
  // Right-continuous at breakpoints.
  EXPECT_EQ(fidelity_at(p, 1.0), 2.0);
  EXPECT_EQ(fidelity_at(p, 2.0), 4.0);
  EXPECT_EQ(fidelity_at(p, std::nextafter(1.0, 0.0)), 1.0);
  EXPECT_THROW(fidelity_at(p, 0.0), RejectError);
  EXPECT_THROW(fidelity_at(p, -1.0), RejectError);
  EXPECT_THROW(fidelity_at(p, std::numeric_limits<double>::infinity()), RejectError);
}

TEST(Profile, DistortionLookup) {
  const auto p = two_stairs();
  EXPECT_EQ(distortion_at(p, 1.0), 0.5);
  EXPECT_EQ(distortion_at(p, 0.25), 0.25);
  EXPECT_EQ(distortion_at(p, 10.0), 1.0);
  EXPECT_THROW(distortion_at(p, 0.0), RejectError);
  EXPECT_THROW(distortion_at(p, std::nan("")), RejectError);
}

TEST(Profile, TruncationLevel) {
  const GeometricSpec spec{2.0, 8.0, std::nullopt};
  // Direct tail evaluation: 2^-20 ln8 = 1.98e-6, 2^-21 ln8 = 9.92e-7.
  EXPECT_GE(std::ldexp(std::log(8.0), -20), 1e-6);
  EXPECT_LT(std::ldexp(std::log(8.0), -21), 1e-6);
  EXPECT_EQ(truncation_level(spec, 1e-6), 21u);
  EXPECT_EQ(truncation_level(spec, std::log(8.0)), 1u);
  EXPECT_THROW(truncation_level({1.0, 8.0, std::nullopt}, 1e-3), RejectError);
  EXPECT_THROW(truncation_level(spec, 0.0), RejectError);
  EXPECT_THROW(truncation_level({2.0, 8.0, 5}, 1e-3), RejectError);
}

TEST(ProfileProperty, DualityRoundTripIsExact) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto p = oracle::random_profile(rng, 8);
    const double quality = std::exp(oracle::uniform(rng, -4.0, 8.0));
    // Same lookup on both sides; the product is 1 up to the rounding of 1/a.
    EXPECT_EQ(distortion_at(p, 1.0 / quality), 1.0 / fidelity_at(p, quality)) << "Q=" << quality;
    EXPECT_NEAR(distortion_at(p, 1.0 / quality) * fidelity_at(p, quality), 1.0, 2.3e-16);
  }
}

TEST(ProfileProperty, FidelityIsNonDecreasingStepWithJumpsAtBreakpoints) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::random_profile(rng, 6);
    double prev = 1.0;
    for (double x = 0.01; x < 2000.0; x *= 1.05) {
      const double f = fidelity_at(p, x);
      EXPECT_GE(f, prev);
      prev = f;
    }
    for (std::size_t k = 0; k < p.levels(); ++k) {
      EXPECT_EQ(fidelity_at(p, p.quality(k)), p.level(k));
      const double before = std::nextafter(p.quality(k), 0.0);
      EXPECT_EQ(fidelity_at(p, before), k == 0 ? 1.0 : p.level(k - 1));
    }
  }
}

TEST(ProfileProperty, GeometricExpansionAlwaysValidates) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const GeometricSpec spec{oracle::uniform(rng, 1.01, 20.0), oracle::uniform(rng, 1.01, 50.0), std::nullopt};
    const auto cap = std::min<std::size_t>(max_representable_levels(spec), 60);
    const auto p = expand_geometric(spec, cap);
    EXPECT_NO_THROW(make_staircase({p.q().begin(), p.q().end()}, {p.a().begin(), p.a().end()}));
  }
}

TEST(ProfileProperty, TruncationLevelMonotoneInEps) {
  const GeometricSpec spec{1.7, 12.0, std::nullopt};
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (double eps = 1e-14; eps < 10.0; eps *= 3.0) {
    const auto k = truncation_level(spec, eps);
    EXPECT_LE(k, prev);
    EXPECT_LT(truncation_tail(spec, k), eps);
    if (k > 1) EXPECT_GE(truncation_tail(spec, k - 1), eps);
    prev = k;
  }
}
