#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edbound/bound_result.hpp"
#include "edbound/profile.hpp"

namespace edbound {

/// Noise levels N_1 >= ... >= N_K > 0 and auxiliary weights
/// tau_1 >= ... >= tau_K = 0 for the broadcast-converse bound family.
struct LowerBoundSchedule {
  std::vector<double> n_seq;
  std::vector<double> tau_seq;
};

/// Throws RejectError when the ordering or sign constraints are violated.
void validate_schedule(const LowerBoundSchedule& sched);

/// Breakpoint schedule N_k = 1/q_k with tau_k = D(N_k) for k < K and tau_K = 0.
LowerBoundSchedule breakpoint_schedule(const StaircaseProfile& p);

/// Unclamped value of the bound family for the given schedule. d_levels[k] is
/// the allowed distortion at n_seq[k].
double lemma1_value(std::span<const double> d_levels, const LowerBoundSchedule& sched);

/// lemma1_value clamped below at zero; branch "clamped" when the clamp fires.
BoundResult lemma1_bound(std::span<const double> d_levels, const LowerBoundSchedule& sched);

/// lemma1_bound on the breakpoint schedule. D(N_k) is taken as 1/a_k exactly
/// rather than read back from the profile at 1/q_k, where rounding can land on
/// the stair below.
BoundResult lemma1_breakpoint_bound(const StaircaseProfile& p);

/// ln(lambda/4) / (gamma - 1) for the unbounded geometric staircase, clamped at 0.
BoundResult thm3_geometric_lower(const GeometricSpec& spec);

/// ln(lambda/4) * sum_{k=1..K} gamma^{-k}; not clamped.
double thm3_partial_sum(const GeometricSpec& spec, std::size_t levels);

enum class TauBranch { kInterior, kInfinity, kZero };

const char* to_string(TauBranch b);

struct TauStar {
  double tau1 = 0.0;  ///< +inf for TauBranch::kInfinity
  TauBranch branch = TauBranch::kInterior;
};

/// Two-level bound objective as a function of tau_1 (tau_2 = 0, D_k = 1/a_k).
double two_level_objective(double n1, double n2, double a1, double a2, double tau1);

/// Maximizer of two_level_objective over tau_1 >= 0.
TauStar thm5_tau_star(double n1, double n2, double a1, double a2);

BoundResult thm5_two_level_lower(double n1, double n2, double a1, double a2);

/// Series sum_{k>=1} 1 / sqrt(4^k e^k - 1) truncated once the remaining tail is
/// provably below tol.
double square_law_constant_c(double tol);

}  // namespace edbound
