#include "edbound/lower_bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "edbound/errors.hpp"

namespace edbound {

namespace {

void validate_two_level(double n1, double n2, double a1, double a2) {
  if (!(std::isfinite(n1) && std::isfinite(n2) && std::isfinite(a1) && std::isfinite(a2))) {
    throw RejectError("two-level parameters must be finite");
  }
  if (!(n2 > 0.0 && n1 > n2)) throw RejectError("two-level noise levels need N1 > N2 > 0");
  if (!(a1 > 1.0 && a2 > a1)) throw RejectError("two-level fidelity levels need 1 < a1 < a2");
}

}  // namespace

void validate_schedule(const LowerBoundSchedule& sched) {
  const auto& n = sched.n_seq;
  const auto& tau = sched.tau_seq;
  if (n.empty() || n.size() != tau.size()) throw RejectError("schedule needs equal, non-zero lengths");
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (!std::isfinite(n[k]) || n[k] <= 0.0) throw RejectError("schedule noise levels must be positive");
    if (!std::isfinite(tau[k]) || tau[k] < 0.0) throw RejectError("schedule tau values must be non-negative");
    if (k > 0 && (n[k] > n[k - 1] || tau[k] > tau[k - 1])) {
      throw RejectError("schedule sequences must be non-increasing");
    }
  }
  if (tau.back() != 0.0) throw RejectError("last tau must be exactly 0");
}

LowerBoundSchedule breakpoint_schedule(const StaircaseProfile& p) {
  LowerBoundSchedule sched;
  const std::size_t levels = p.levels();
  sched.n_seq.resize(levels);
  sched.tau_seq.resize(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    sched.n_seq[k] = p.noise(k);
    sched.tau_seq[k] = (k + 1 < levels) ? 1.0 / p.level(k) : 0.0;
  }
  return sched;
}

double lemma1_value(std::span<const double> d_levels, const LowerBoundSchedule& sched) {
  validate_schedule(sched);
  const auto& n = sched.n_seq;
  const auto& tau = sched.tau_seq;
  if (d_levels.size() != n.size()) throw RejectError("d_levels length must match the schedule");
  for (double d : d_levels) {
    if (!(d > 0.0 && d <= 1.0)) throw RejectError("distortion levels must lie in (0, 1]");
  }

  double value = n[0] * std::log((1.0 + tau[0]) / (d_levels[0] + tau[0]));
  for (std::size_t k = 1; k < n.size(); ++k) {
    const double ratio = ((1.0 + tau[k]) * (d_levels[k] + tau[k - 1])) /
                         ((1.0 + tau[k - 1]) * (d_levels[k] + tau[k]));
    value += n[k] * std::log(ratio);
  }
  return value;
}

BoundResult lemma1_bound(std::span<const double> d_levels, const LowerBoundSchedule& sched) {
  const double value = lemma1_value(d_levels, sched);
  BoundResult r{std::max(0.0, value), Direction::kLower, "lemma1", std::nullopt};
  if (value < 0.0) r.branch = "clamped";
  return r;
}

BoundResult lemma1_breakpoint_bound(const StaircaseProfile& p) {
  std::vector<double> d(p.levels());
  for (std::size_t k = 0; k < p.levels(); ++k) d[k] = 1.0 / p.level(k);
  return lemma1_bound(d, breakpoint_schedule(p));
}

BoundResult thm3_geometric_lower(const GeometricSpec& spec) {
  validate_geometric(spec);
  if (!spec.unbounded()) throw RejectError("thm3 closed form needs an unbounded staircase");
  const double value = std::log(spec.lambda / 4.0) / (spec.gamma - 1.0);
  const bool clamped = !(value > 0.0);
  return {clamped ? 0.0 : value, Direction::kLower, "thm3", clamped ? "clamped" : "unclamped"};
}

double thm3_partial_sum(const GeometricSpec& spec, std::size_t levels) {
  validate_geometric(spec);
  if (levels == 0) throw RejectError("partial sum needs K >= 1");
  // Neumaier summation; terms are formed independently so no drift accumulates.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 1; k <= levels; ++k) {
    const double term = std::pow(spec.gamma, -static_cast<double>(k));
    const double t = sum + term;
    carry += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return std::log(spec.lambda / 4.0) * (sum + carry);
}

const char* to_string(TauBranch b) {
  switch (b) {
    case TauBranch::kInterior: return "interior";
    case TauBranch::kInfinity: return "infinity";
    case TauBranch::kZero: return "zero";
  }
  return "unknown";
}

double two_level_objective(double n1, double n2, double a1, double a2, double tau1) {
  const double d1 = 1.0 / a1;
  const double d2 = 1.0 / a2;
  if (std::isinf(tau1)) return n2 * std::log(a2);
  return n1 * std::log((1.0 + tau1) / (d1 + tau1)) + n2 * std::log((d2 + tau1) / ((1.0 + tau1) * d2));
}

TauStar thm5_tau_star(double n1, double n2, double a1, double a2) {
  validate_two_level(n1, n2, a1, a2);
  const double ratio = n2 / n1;
  const double lower_cut = (a1 - 1.0) / (a2 - 1.0);
  const double upper_cut = a2 * (a1 - 1.0) / (a1 * (a2 - 1.0));

  if (ratio > upper_cut) return {std::numeric_limits<double>::infinity(), TauBranch::kInfinity};
  if (ratio < lower_cut) return {0.0, TauBranch::kZero};

  // Ties land here; at the upper cut the denominator vanishes and the maximizer
  // is the tau -> infinity limit.
  const double d1 = 1.0 / a1;
  const double d2 = 1.0 / a2;
  const double num = n1 * (d1 - 1.0) * d2 - n2 * (d2 - 1.0) * d1;
  const double den = n1 * (1.0 - d1) - n2 * (1.0 - d2);
  double tau = num / den;
  if (!(den > 0.0) || !std::isfinite(tau)) tau = std::numeric_limits<double>::infinity();
  return {std::max(0.0, tau), TauBranch::kInterior};
}

BoundResult thm5_two_level_lower(double n1, double n2, double a1, double a2) {
  const TauStar star = thm5_tau_star(n1, n2, a1, a2);
  BoundResult r{0.0, Direction::kLower, "thm5", to_string(star.branch)};
  switch (star.branch) {
    case TauBranch::kInfinity:
      r.energy = n2 * std::log(a2);
      break;
    case TauBranch::kZero:
      r.energy = n1 * std::log(a1);
      break;
    case TauBranch::kInterior:
      // a1 a2 - a2 - a1 + 1 = (a1-1)(a2-1), a1 a2 - a2 + a1 - a1^2 = (a1-1)(a2-a1),
      // -a1 a2 + a1 - a2 + a2^2 = (a2-a1)(a2-1).
      r.energy = n1 * std::log(a1 * (a2 - 1.0) * (n1 - n2) / (n1 * (a2 - a1))) +
                 n2 * std::log(n2 * (a2 - a1) / ((a1 - 1.0) * (n1 - n2)));
      break;
  }
  return r;
}

double square_law_constant_c(double tol) {
  if (!std::isfinite(tol) || tol <= 0.0) throw RejectError("tol must be positive");
  const double log_ratio = std::numbers::ln2 * 2.0 + 1.0;  // ln(4e)
  const double r = 1.0 / (2.0 * std::sqrt(std::numbers::e));
  double sum = 0.0;
  for (int k = 1;; ++k) {
    const double term = 1.0 / std::sqrt(std::expm1(k * log_ratio));
    sum += term;
    if (term * r / (1.0 - r) < tol) break;
  }
  return sum;
}

}  // namespace edbound
