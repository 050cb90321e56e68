#include "edbound/upper_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edbound/errors.hpp"
#include "edbound/quadrature.hpp"

namespace edbound {

namespace {

void require_e0(double e0) {
  if (!std::isfinite(e0) || e0 < 0.0) throw RejectError("analog energy e0 must be finite and >= 0");
}

void require_feasible(const StaircaseProfile& p, double e0) {
  require_e0(e0);
  const double z = e0_feasible_max(p);
  if (e0 > z) {
    throw InfeasibleError("e0 = " + std::to_string(e0) + " exceeds the feasibility cap Z = " + std::to_string(z));
  }
}

void require_beta(const StaircaseProfile& p, std::span<const double> beta) {
  if (beta.size() != p.levels()) throw RejectError("beta must have one entry per stair");
  for (double b : beta) {
    if (!std::isfinite(b)) throw RejectError("beta entries must be finite");
  }
}

// q_{k-1} and a_{k-1} with (q_0, a_0) = (0, 1).
double prev_quality(const StaircaseProfile& p, std::size_t k) { return k == 0 ? 0.0 : p.quality(k - 1); }
double prev_level(const StaircaseProfile& p, std::size_t k) { return k == 0 ? 1.0 : p.level(k - 1); }

double inverse_power_sum(double gamma, std::size_t levels) {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 1; k <= levels; ++k) {
    const double term = std::pow(gamma, -static_cast<double>(k));
    const double t = sum + term;
    carry += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + carry;
}

double two_level_energy(double n1, double n2, double a1, double a2, double e0) {
  return e0 + n1 * std::log(a1 / (e0 / n1 + 1.0)) + n2 * std::log(a2 / (e0 * (1.0 / n2 - 1.0 / n1) + a1));
}

}  // namespace

double point_to_point_distortion(double energy, double noise) {
  if (!std::isfinite(energy) || energy < 0.0) throw RejectError("energy must be finite and >= 0");
  if (!std::isfinite(noise) || noise <= 0.0) throw RejectError("noise must be positive and finite");
  return std::exp(-energy / noise);
}

BoundResult digital_only_energy(const StaircaseProfile& p) {
  double energy = 0.0;
  for (std::size_t k = 0; k < p.levels(); ++k) {
    energy += p.noise(k) * std::log(p.level(k) / prev_level(p, k));
  }
  return {energy, Direction::kUpper, "digital_only", std::nullopt};
}

BoundResult thm4_geometric_upper(const GeometricSpec& spec) {
  validate_geometric(spec);
  if (!spec.unbounded()) throw RejectError("thm4 closed form needs an unbounded staircase");
  return {std::log(spec.lambda) / (spec.gamma - 1.0), Direction::kUpper, "thm4", std::nullopt};
}

double thm4_partial_sum(const GeometricSpec& spec, std::size_t levels) {
  validate_geometric(spec);
  if (levels == 0) throw RejectError("partial sum needs K >= 1");
  return std::log(spec.lambda) * inverse_power_sum(spec.gamma, levels);
}

double e0_feasible_max(const StaircaseProfile& p) {
  double z = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.levels(); ++k) {
    z = std::min(z, (p.level(k) - prev_level(p, k)) / (p.quality(k) - prev_quality(p, k)));
  }
  return z;
}

double geometric_z(const GeometricSpec& spec) {
  validate_geometric(spec);
  const double g = spec.gamma;
  const double l = spec.lambda;
  const double first = (l - 1.0) / g;
  if (l >= g) return first;
  if (spec.unbounded()) return 0.0;
  if (*spec.levels == 1) return first;
  // Terms for k >= 2 shrink like (lambda/gamma)^{k-1}; the last one is smallest.
  const double last = (l - 1.0) / (g - 1.0) * std::pow(l / g, static_cast<double>(*spec.levels - 1));
  return std::min(first, last);
}

std::vector<double> beta_star(const StaircaseProfile& p, double e0) {
  require_feasible(p, e0);
  std::vector<double> beta(p.levels());
  for (std::size_t k = 0; k < p.levels(); ++k) beta[k] = p.level(k) - e0 * p.quality(k);
  return beta;
}

double layer_energy(std::size_t k, double e0, std::span<const double> beta, const StaircaseProfile& p) {
  if (k >= p.levels()) throw RejectError("layer index out of range");
  require_e0(e0);
  require_beta(p, beta);
  const double prev = k == 0 ? 1.0 : beta[k - 1];
  const double analog = e0 * p.quality(k);
  return p.noise(k) * std::log((analog + beta[k]) / (analog + prev));
}

double digital_energy(const StaircaseProfile& p, double e0, std::span<const double> beta) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.levels(); ++k) sum += layer_energy(k, e0, beta, p);
  return sum;
}

std::vector<double> digital_energy_gradient(const StaircaseProfile& p, double e0,
                                            std::span<const double> beta) {
  require_e0(e0);
  require_beta(p, beta);
  const std::size_t levels = p.levels();
  std::vector<double> grad(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    grad[k] = p.noise(k) / (e0 * p.quality(k) + beta[k]);
    if (k + 1 < levels) grad[k] -= p.noise(k + 1) / (e0 * p.quality(k + 1) + beta[k]);
  }
  return grad;
}

std::vector<double> digital_energy_hessian_diag(const StaircaseProfile& p, double e0,
                                                std::span<const double> beta) {
  require_e0(e0);
  require_beta(p, beta);
  const std::size_t levels = p.levels();
  std::vector<double> diag(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const double own = e0 * p.quality(k) + beta[k];
    diag[k] = -p.noise(k) / (own * own);
    if (k + 1 < levels) {
      const double next = e0 * p.quality(k + 1) + beta[k];
      diag[k] += p.noise(k + 1) / (next * next);
    }
  }
  return diag;
}

double total_energy_unchecked(const StaircaseProfile& p, double e0) {
  require_e0(e0);
  double energy = e0;
  for (std::size_t k = 0; k < p.levels(); ++k) {
    const double dq = p.quality(k) - prev_quality(p, k);
    energy += p.noise(k) * std::log(p.level(k) / (e0 * dq + prev_level(p, k)));
  }
  return energy;
}

double total_energy(const StaircaseProfile& p, double e0) {
  require_feasible(p, e0);
  return total_energy_unchecked(p, e0);
}

double total_energy_derivative_unchecked(const StaircaseProfile& p, double e0) {
  require_e0(e0);
  double slope = 1.0;
  for (std::size_t k = 0; k < p.levels(); ++k) {
    const double dq = p.quality(k) - prev_quality(p, k);
    slope -= p.noise(k) * dq / (e0 * dq + prev_level(p, k));
  }
  return slope;
}

double total_energy_derivative(const StaircaseProfile& p, double e0) {
  require_feasible(p, e0);
  return total_energy_derivative_unchecked(p, e0);
}

OptimizeReport optimize_e0(const StaircaseProfile& p, double tol) {
  if (!std::isfinite(tol) || tol <= 0.0) throw RejectError("tol must be positive");
  OptimizeReport report;
  report.z = e0_feasible_max(p);
  report.degenerate = !(report.z > 0.0);

  const auto slope = [&](double e0) { return total_energy_derivative_unchecked(p, e0); };
  if (slope(0.0) < 0.0) {
    // The derivative tends to 1 as e0 grows, so doubling always brackets the root.
    double lo = 0.0;
    double hi = p.noise(0);
    while (slope(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
    }
    double best = hi;
    double best_abs = std::abs(slope(hi));
    while (report.iterations < 2000) {
      const double mid = lo + 0.5 * (hi - lo);
      if (!(mid > lo && mid < hi)) break;
      ++report.iterations;
      const double s = slope(mid);
      if (std::abs(s) < best_abs) {
        best = mid;
        best_abs = std::abs(s);
      }
      if (best_abs < tol) break;
      (s < 0.0 ? lo : hi) = mid;
    }
    report.e0_star = best;
  }

  report.e0_used = report.e0_star < report.z ? report.e0_star : report.z;
  if (report.degenerate) report.e0_used = 0.0;
  report.energy = total_energy_unchecked(p, report.e0_used);
  return report;
}

OptimizeReport thm6_two_level(double n1, double n2, double a1, double a2) {
  if (!(std::isfinite(n1) && std::isfinite(n2) && std::isfinite(a1) && std::isfinite(a2))) {
    throw RejectError("two-level parameters must be finite");
  }
  if (!(n2 > 0.0 && n1 > n2)) throw RejectError("two-level noise levels need N1 > N2 > 0");
  if (!(a1 > 1.0 && a2 > a1)) throw RejectError("two-level fidelity levels need 1 < a1 < a2");

  const double dq = 1.0 / n2 - 1.0 / n1;
  const double m = a1 / dq;
  const double b = m - n2;
  const double disc = std::sqrt(b * b + 4.0 * n2 * n1);
  // Positive root of e^2 + (M - N2) e - N1 N2 = 0; the product form avoids
  // cancellation when M - N2 > 0.
  const double e0_star = b > 0.0 ? 2.0 * n1 * n2 / (b + disc) : 0.5 * (-b + disc);

  OptimizeReport report;
  report.e0_star = e0_star;
  report.z = std::min(n1 * (a1 - 1.0), (a2 - a1) / dq);
  report.e0_used = e0_star < report.z ? e0_star : report.z;
  report.energy = two_level_energy(n1, n2, a1, a2, report.e0_used);
  return report;
}

double achieved_fidelity(const StaircaseProfile& p, const SchemeConfig& cfg, double quality) {
  if (!std::isfinite(quality) || quality <= 0.0) throw RejectError("quality Q must be positive and finite");
  require_e0(cfg.e0);
  require_beta(p, cfg.beta);
  const auto q = p.q();
  const auto above = std::upper_bound(q.begin(), q.end(), quality);
  const double offset = above == q.begin() ? 1.0 : cfg.beta[static_cast<std::size_t>(above - q.begin()) - 1];
  return cfg.e0 * quality + offset;
}

double dilog_minus_two(double tol) {
  if (!std::isfinite(tol) || tol <= 0.0) throw RejectError("tol must be positive");
  // ln(1 + 2u)/u -> 2 as u -> 0.
  const auto integrand = [](double u) { return u <= 1e-12 ? 2.0 : std::log1p(2.0 * u) / u; };
  return -adaptive_simpson(integrand, 0.0, 1.0, tol);
}

double square_law_constant_d(double tol) {
  return 2.0 * std::sqrt(std::log(3.0) - dilog_minus_two(tol));
}

}  // namespace edbound
