#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "edbound/lower_bounds.hpp"
#include "edbound/profile.hpp"

namespace edbound::oracle {

// Brute-force counterparts of the closed forms. Nothing here calls the
// closed-form optimizers it is meant to check.

struct OracleConfig {
  std::size_t grid_points = 2000;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-7;
};

void validate(const OracleConfig& cfg);

/// Uniform draw in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

struct TauSearch {
  double tau = 0.0;
  double value = 0.0;
};

/// Grid maximization of the two-level objective over tau_1 >= 0.
TauSearch grid_max_tau1(double n1, double n2, double a1, double a2, const OracleConfig& cfg);

struct GoldenResult {
  double e0 = 0.0;
  double energy = 0.0;
  int iterations = 0;
  bool degenerate = false;  ///< Z == 0; returned the e0 = 0 scheme
};

/// Golden-section minimization of total_energy on [0, Z].
GoldenResult golden_min_e0(const StaircaseProfile& p, const OracleConfig& cfg);

struct Verdict {
  bool pass = true;
  double worst_margin = 0.0;
  std::size_t evaluated = 0;
};

/// digital_energy(beta) - digital_energy(beta_star(e0)).
double corner_margin(const StaircaseProfile& p, double e0, const std::vector<double>& beta);

/// Random feasible beta vectors above the corner; PASS when none beats it.
Verdict sample_beta_feasible(const StaircaseProfile& p, double e0, const OracleConfig& cfg);

struct FiniteDiffReport {
  Verdict derivative_match;  ///< (i) centered differences vs analytic dE/de0, relative error
  Verdict convexity_e0;      ///< (ii) second differences in e0 >= -1e-9
  Verdict concavity_beta;    ///< (iii) second differences in beta_k <= 1e-9
  Verdict increasing_beta;   ///< (iv) first differences in beta_k > 0

  [[nodiscard]] bool pass() const {
    return derivative_match.pass && convexity_e0.pass && concavity_beta.pass && increasing_beta.pass;
  }
};

/// Step h = max(1e-6, 1e-6 |x|).
inline double fd_step(double x) { return std::max(1e-6, 1e-6 * std::abs(x)); }

FiniteDiffReport finite_diff_check(const StaircaseProfile& p, const OracleConfig& cfg);

struct ScheduleSearch {
  LowerBoundSchedule schedule;
  double value = 0.0;
};

/// Random valid staircase with 1..max_levels stairs and fidelity levels below ~600.
StaircaseProfile random_profile(std::mt19937_64& rng, std::size_t max_levels);

struct TwoLevelInstance {
  double n1 = 1.0;
  double n2 = 0.5;
  double a1 = 2.0;
  double a2 = 4.0;
  TauBranch branch = TauBranch::kInterior;
};

/// Random two-level parameters whose ratio N2/N1 falls strictly inside the
/// requested branch of the tau_1 maximizer.
TwoLevelInstance random_two_level(std::mt19937_64& rng, TauBranch target);

/// Coordinate ascent over (N_k, tau_k) grids for a K <= 3 schedule, with
/// distortions read off the profile at each candidate N_k.
ScheduleSearch lemma1_search(const StaircaseProfile& p, std::size_t levels, const OracleConfig& cfg);

}  // namespace edbound::oracle
