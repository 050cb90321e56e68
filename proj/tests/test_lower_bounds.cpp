#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "edbound/errors.hpp"
#include "edbound/lower_bounds.hpp"
#include "edbound/oracle.hpp"
#include "support/reference.hpp"

using namespace edbound;

namespace {
constexpr double kLn2 = std::numbers::ln2;
const GeometricSpec kInf28{2.0, 8.0, std::nullopt};
}  // namespace

TEST(Lemma1, SingleLevelReducesToPointToPoint) {
  const double d[] = {0.5};
  const auto r = lemma1_bound(d, {{1.0}, {0.0}});
  EXPECT_NEAR(r.energy, kLn2, 1e-15);
  EXPECT_EQ(r.direction, Direction::kLower);
  EXPECT_EQ(r.method, "lemma1");
}

TEST(Lemma1, TwoLevelTermByTerm) {
  // First term ln((1+0.5)/(0.5+0.5)); second 0.5 ln((1)(0.25+0.5)/((1.5)(0.25))).
  const double first = 1.0 * std::log(1.5 / 1.0);
  const double second = 0.5 * std::log((1.0 * 0.75) / (1.5 * 0.25));
  const double d[] = {0.5, 0.25};
  const auto r = lemma1_bound(d, {{1.0, 0.5}, {0.5, 0.0}});
  EXPECT_NEAR(r.energy, first + second, 1e-15);
  EXPECT_NEAR(r.energy, 0.752038698388137, 1e-12);
}

TEST(Lemma1, RepeatedLevelSecondTermVanishes) {
  const double d[] = {0.5, 0.5};
  EXPECT_NEAR(lemma1_bound(d, {{1.0, 1.0}, {0.0, 0.0}}).energy, kLn2, 1e-15);
}

TEST(Lemma1Property, EveryTermIsNonNegative) {
  // (1+t_k)(D+t_{k-1}) - (1+t_{k-1})(D+t_k) = (t_{k-1}-t_k)(1-D) >= 0, so the
  // clamp at zero never fires for valid inputs.
  std::mt19937_64 rng(41);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t k = 1 + static_cast<std::size_t>(oracle::unit_uniform(rng) * 5);
    LowerBoundSchedule s;
    std::vector<double> d;
    for (std::size_t j = 0; j < k; ++j) {
      s.n_seq.push_back(std::exp(oracle::uniform(rng, -3.0, 3.0)));
      s.tau_seq.push_back(j + 1 < k ? std::exp(oracle::uniform(rng, -8.0, 4.0)) : 0.0);
      d.push_back(oracle::uniform(rng, 1e-6, 1.0));
    }
    std::sort(s.n_seq.rbegin(), s.n_seq.rend());
    std::sort(s.tau_seq.rbegin(), s.tau_seq.rend());
    const auto r = lemma1_bound(d, s);
    EXPECT_GE(lemma1_value(d, s), 0.0);
    EXPECT_FALSE(r.branch.has_value());
  }
}

TEST(Lemma1, RejectsInvalidInput) {
  const double d[] = {0.5, 0.25};
  EXPECT_THROW(lemma1_bound(d, {{0.5, 1.0}, {0.5, 0.0}}), RejectError);   // N increasing
  EXPECT_THROW(lemma1_bound(d, {{1.0, 0.5}, {0.5, 0.1}}), RejectError);   // last tau not 0
  EXPECT_THROW(lemma1_bound(d, {{1.0, 0.5}, {0.1, 0.2}}), RejectError);   // tau increasing
  EXPECT_THROW(lemma1_bound(d, {{1.0}, {0.0}}), RejectError);             // length mismatch
  EXPECT_THROW(lemma1_bound(d, {{1.0, -0.5}, {0.5, 0.0}}), RejectError);
  const double bad[] = {0.5, 1.5};
  EXPECT_THROW(lemma1_bound(bad, {{1.0, 0.5}, {0.5, 0.0}}), RejectError);
  const double zero[] = {0.0, 0.5};
  EXPECT_THROW(lemma1_bound(zero, {{1.0, 0.5}, {0.5, 0.0}}), RejectError);
}

TEST(Lemma1, BreakpointScheduleUsesProfileDistortions) {
  const auto p = make_staircase({1.0, 2.0}, {2.0, 4.0});
  const auto s = breakpoint_schedule(p);
  EXPECT_EQ(s.n_seq, (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(s.tau_seq, (std::vector<double>{0.5, 0.0}));
}

TEST(Thm3, ClosedForm) {
  EXPECT_NEAR(thm3_geometric_lower(kInf28).energy, kLn2, 1e-15);
  const auto clamped = thm3_geometric_lower({2.0, 4.0, std::nullopt});
  EXPECT_EQ(clamped.energy, 0.0);
  EXPECT_EQ(clamped.branch, "clamped");
  EXPECT_EQ(thm3_geometric_lower({2.0, 3.0, std::nullopt}).energy, 0.0);
  EXPECT_NEAR(thm3_geometric_lower({3.0, 16.0, std::nullopt}).energy, std::log(4.0) / 2.0, 1e-15);
  EXPECT_THROW(thm3_geometric_lower({1.0, 8.0, std::nullopt}), RejectError);
  EXPECT_THROW(thm3_geometric_lower({2.0, 8.0, 3}), RejectError);
}

TEST(Thm3, PartialSums) {
  EXPECT_NEAR(thm3_partial_sum(kInf28, 1), kLn2 * 0.5, 1e-15);
  EXPECT_NEAR(thm3_partial_sum(kInf28, 10), kLn2 * (1.0 - std::ldexp(1.0, -10)), 1e-15);
  EXPECT_NEAR(thm3_partial_sum(kInf28, 60), thm3_geometric_lower(kInf28).energy, 1e-12);
  // Unclamped below lambda = 4.
  EXPECT_LT(thm3_partial_sum({2.0, 2.0, std::nullopt}, 5), 0.0);
}

TEST(Thm3Property, PartialSumsIncreaseAndConverge) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const GeometricSpec spec{oracle::uniform(rng, 1.1, 10.0), oracle::uniform(rng, 4.1, 100.0), std::nullopt};
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= 40; ++k) {
      const double s = thm3_partial_sum(spec, k);
      // Strict until the added term drops below the last ulp.
      if (std::pow(spec.gamma, -static_cast<double>(k)) > 1e-15) EXPECT_GT(s, prev);
      prev = s;
    }
    const auto limit = thm3_geometric_lower(spec).energy;
    EXPECT_LE(prev, limit * (1.0 + 1e-14));
    EXPECT_NEAR(thm3_partial_sum(spec, 2000), limit, 1e-12 * limit);
  }
}

TEST(Thm5, TauStarBranches) {
  const auto interior = thm5_tau_star(1.0, 0.5, 2.0, 4.0);
  EXPECT_EQ(interior.branch, TauBranch::kInterior);
  EXPECT_NEAR(interior.tau1, 0.5, 1e-15);
  // Brute-force grid over tau in [0, 5] agrees with the interior maximizer.
  const auto f = [](double t) { return two_level_objective(1.0, 0.5, 2.0, 4.0, t); };
  EXPECT_NEAR(reference::grid_max(f, 0.0, 5.0, 500000), f(0.5), 1e-10);

  const auto inf = thm5_tau_star(1.0, 0.9, 2.0, 4.0);
  EXPECT_EQ(inf.branch, TauBranch::kInfinity);
  EXPECT_TRUE(std::isinf(inf.tau1));

  const auto zero = thm5_tau_star(1.0, 0.2, 2.0, 4.0);
  EXPECT_EQ(zero.branch, TauBranch::kZero);
  EXPECT_EQ(zero.tau1, 0.0);
}

TEST(Thm5, RejectsOrderingViolations) {
  EXPECT_THROW(thm5_tau_star(0.5, 1.0, 2.0, 4.0), RejectError);
  EXPECT_THROW(thm5_tau_star(1.0, 0.5, 4.0, 2.0), RejectError);
  EXPECT_THROW(thm5_tau_star(1.0, 0.5, 1.0, 4.0), RejectError);
  EXPECT_THROW(thm5_tau_star(1.0, 0.0, 2.0, 4.0), RejectError);
  EXPECT_THROW(thm5_two_level_lower(1.0, 1.0, 2.0, 4.0), RejectError);
}

TEST(Thm5, LowerBoundBranches) {
  const auto interior = thm5_two_level_lower(1.0, 0.5, 2.0, 4.0);
  EXPECT_NEAR(interior.energy, std::log(1.5) + 0.5 * kLn2, 1e-14);
  EXPECT_EQ(interior.branch, "interior");
  EXPECT_NEAR(thm5_two_level_lower(1.0, 0.9, 2.0, 4.0).energy, 0.9 * std::log(4.0), 1e-15);
  EXPECT_NEAR(thm5_two_level_lower(1.0, 0.2, 2.0, 4.0).energy, kLn2, 1e-15);
}

TEST(Thm5, ThresholdTiesMatchNeighbouringBranches) {
  // N2/N1 exactly at 2/3 and 1/3 for a1 = 2, a2 = 4 (exactly representable ratios not
  // required; the tie rule routes through the interior formula).
  const double upper = thm5_two_level_lower(3.0, 2.0, 2.0, 4.0).energy;
  EXPECT_NEAR(upper, 2.0 * std::log(4.0), 1e-12);
  const double lower = thm5_two_level_lower(3.0, 1.0, 2.0, 4.0).energy;
  EXPECT_NEAR(lower, 3.0 * kLn2, 1e-12);
}

TEST(Thm5Property, ScheduleDominance) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const auto inst = oracle::random_two_level(rng, static_cast<TauBranch>(i % 3));
    const double closed = thm5_two_level_lower(inst.n1, inst.n2, inst.a1, inst.a2).energy;
    const double d[] = {1.0 / inst.a1, 1.0 / inst.a2};
    for (int s = 0; s < 20; ++s) {
      const double tau = std::exp(oracle::uniform(rng, -12.0, 12.0));
      const auto r = lemma1_bound(d, {{inst.n1, inst.n2}, {tau, 0.0}});
      EXPECT_LE(r.energy, closed + 1e-9);
    }
  }
}

TEST(Thm5Property, ContinuousAcrossThresholds) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const double a1 = 1.0 + oracle::uniform(rng, 0.1, 4.0);
    const double a2 = a1 * oracle::uniform(rng, 1.2, 6.0);
    const double n1 = oracle::uniform(rng, 0.5, 2.0);
    for (double cut : {(a1 - 1.0) / (a2 - 1.0), a2 * (a1 - 1.0) / (a1 * (a2 - 1.0))}) {
      const double below = thm5_two_level_lower(n1, n1 * (cut - 1e-6), a1, a2).energy;
      const double above = thm5_two_level_lower(n1, n1 * (cut + 1e-6), a1, a2).energy;
      EXPECT_LT(std::abs(above - below), 1e-4);
    }
  }
}

TEST(LowerProperty, Lemma1ScalingHomogeneity) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::random_profile(rng, 6);
    const auto sched = breakpoint_schedule(p);
    std::vector<double> d;
    for (double n : sched.n_seq) d.push_back(distortion_at(p, n));
    const double base = lemma1_value(d, sched);
    for (double s : {0.1, 3.0, 17.0}) {
      auto scaled = sched;
      for (double& n : scaled.n_seq) n *= s;
      EXPECT_NEAR(lemma1_value(d, scaled), s * base, 1e-12 * std::abs(s * base) + 1e-300);
    }
  }
}

TEST(ConstantC, MatchesReportedValueAndTailContract) {
  const double c = square_law_constant_c(1e-6);
  EXPECT_NEAR(c, 0.4507, 5e-4);
  // First term alone, 1/sqrt(4e - 1) = 0.3182531.
  EXPECT_NEAR(square_law_constant_c(1.0) , 0.3182530917168639, 1e-15);
  EXPECT_NEAR(1.0 / std::sqrt(4.0 * std::exp(1.0) - 1.0), 0.31826, 1e-5);
  EXPECT_NEAR(square_law_constant_c(1e-3), square_law_constant_c(1e-10), 1e-3);
  // High-precision value from a 30-digit evaluation of the series.
  EXPECT_NEAR(square_law_constant_c(1e-15), 0.450656973001079526, 1e-14);
  EXPECT_THROW(square_law_constant_c(0.0), RejectError);
}
