#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edbound/bound_result.hpp"
#include "edbound/profile.hpp"

namespace edbound {

/// Layered scheme: uncoded energy e0 followed by digital refinement layers whose
/// post-layer fidelity offsets are beta_1 < ... < beta_K.
struct SchemeConfig {
  double e0 = 0.0;
  std::vector<double> beta;
};

struct OptimizeReport {
  double e0_star = 0.0;  ///< unconstrained minimizer of total_energy
  double z = 0.0;        ///< feasibility cap on e0
  double e0_used = 0.0;
  double energy = 0.0;
  int iterations = 0;
  bool degenerate = false;  ///< z == 0; only the digital-only scheme is admissible
};

/// exp(-E/N): distortion reachable point-to-point with energy E at noise N.
double point_to_point_distortion(double energy, double noise);

/// sum_k N_k ln(a_k / a_{k-1}) with a_0 = 1.
BoundResult digital_only_energy(const StaircaseProfile& p);

/// ln(lambda) / (gamma - 1) for the unbounded geometric staircase.
BoundResult thm4_geometric_upper(const GeometricSpec& spec);

/// ln(lambda) * sum_{k=1..K} gamma^{-k}; digital-only energy of the K-level
/// truncation computed without forming lambda^k.
double thm4_partial_sum(const GeometricSpec& spec, std::size_t levels);

/// Z = min_k (a_k - a_{k-1}) / (q_k - q_{k-1}) with (a_0, q_0) = (1, 0).
double e0_feasible_max(const StaircaseProfile& p);

/// Closed-form Z of the unbounded geometric staircase.
double geometric_z(const GeometricSpec& spec);

/// Corner solution beta_k = a_k - e0 q_k. Throws InfeasibleError for e0 > Z.
std::vector<double> beta_star(const StaircaseProfile& p, double e0);

/// B_k = N_k ln((e0 q_k + beta_k) / (e0 q_k + beta_{k-1})), beta_0 = 1, k is 0-based.
double layer_energy(std::size_t k, double e0, std::span<const double> beta, const StaircaseProfile& p);

/// Sum of layer energies for an arbitrary beta vector.
double digital_energy(const StaircaseProfile& p, double e0, std::span<const double> beta);

/// Analytic gradient of digital_energy with respect to beta.
std::vector<double> digital_energy_gradient(const StaircaseProfile& p, double e0,
                                            std::span<const double> beta);

/// Diagonal of the Hessian of digital_energy; off-diagonal entries vanish.
std::vector<double> digital_energy_hessian_diag(const StaircaseProfile& p, double e0,
                                                std::span<const double> beta);

/// e0 + E_D at the corner beta, in closed form. Throws InfeasibleError for e0 > Z.
double total_energy(const StaircaseProfile& p, double e0);

/// Same as total_energy but without the feasibility check; the expression is
/// well defined for every e0 >= 0 and is used to locate the unconstrained optimum.
double total_energy_unchecked(const StaircaseProfile& p, double e0);

double total_energy_derivative(const StaircaseProfile& p, double e0);
double total_energy_derivative_unchecked(const StaircaseProfile& p, double e0);

/// Minimizes total_energy over [0, Z]. The unconstrained root of the derivative is
/// located by bisection; e0_used = e0_star when e0_star < Z, else Z.
OptimizeReport optimize_e0(const StaircaseProfile& p, double tol = 1e-15);

/// Closed-form optimum for two stairs (N1 > N2, a1 < a2).
OptimizeReport thm6_two_level(double n1, double n2, double a1, double a2);

/// e0 Q + beta_{kappa(Q)}, kappa(Q) = max{k : q_k <= Q}, beta_0 = 1.
double achieved_fidelity(const StaircaseProfile& p, const SchemeConfig& cfg, double quality);

/// Li_2(-2) = -int_0^1 ln(1 + 2u)/u du by adaptive quadrature.
double dilog_minus_two(double tol);

/// 2 sqrt(ln 3 - Li_2(-2)).
double square_law_constant_d(double tol);

}  // namespace edbound
