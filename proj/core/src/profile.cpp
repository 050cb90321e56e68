#include "edbound/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edbound/errors.hpp"

namespace edbound {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](double x, double y) { return !(x < y); }) == v.end();
}

void require_positive_finite(double x, const char* what) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw RejectError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

StaircaseProfile::StaircaseProfile(std::vector<double> q, std::vector<double> a)
    : q_(std::move(q)), a_(std::move(a)) {
  if (q_.empty()) throw RejectError("profile needs at least one stair");
  if (q_.size() != a_.size()) throw RejectError("q and a must have equal length");
  for (std::size_t k = 0; k < q_.size(); ++k) {
    if (!std::isfinite(q_[k]) || q_[k] <= 0.0) throw RejectError("breakpoints q_k must be positive and finite");
    if (!std::isfinite(a_[k]) || a_[k] <= 1.0) throw RejectError("fidelity levels a_k must be finite and > 1");
  }
  if (!strictly_increasing(q_)) throw RejectError("breakpoints q_k must be strictly increasing");
  if (!strictly_increasing(a_)) throw RejectError("fidelity levels a_k must be strictly increasing");
  // N_k = 1/q_k can collapse for neighbouring huge breakpoints.
  for (std::size_t k = 1; k < q_.size(); ++k) {
    if (!(1.0 / q_[k] < 1.0 / q_[k - 1])) throw RejectError("noise levels 1/q_k must be strictly decreasing");
  }
}

StaircaseProfile make_staircase(std::vector<double> q, std::vector<double> a) {
  return StaircaseProfile(std::move(q), std::move(a));
}

void validate_geometric(const GeometricSpec& spec) {
  if (!std::isfinite(spec.gamma) || spec.gamma <= 1.0) throw RejectError("gamma must be finite and > 1");
  if (!std::isfinite(spec.lambda) || spec.lambda <= 1.0) throw RejectError("lambda must be finite and > 1");
  if (spec.levels && *spec.levels == 0) throw RejectError("geometric level count must be >= 1");
}

std::size_t max_representable_levels(const GeometricSpec& spec) {
  validate_geometric(spec);
  const double base = std::max(spec.gamma, spec.lambda);
  std::size_t k = static_cast<std::size_t>(std::log(std::numeric_limits<double>::max()) / std::log(base));
  while (k > 0 && !(std::isfinite(std::pow(spec.gamma, static_cast<double>(k))) &&
                    std::isfinite(std::pow(spec.lambda, static_cast<double>(k))))) {
    --k;
  }
  return k;
}

StaircaseProfile expand_geometric(const GeometricSpec& spec, std::size_t levels_cap) {
  validate_geometric(spec);
  if (levels_cap == 0) throw RejectError("levels_cap must be >= 1");
  const std::size_t count = spec.levels ? std::min(*spec.levels, levels_cap) : levels_cap;
  std::vector<double> q(count);
  std::vector<double> a(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto e = static_cast<double>(k + 1);
    q[k] = std::pow(spec.gamma, e);
    a[k] = std::pow(spec.lambda, e);
    if (!std::isfinite(q[k]) || !std::isfinite(a[k])) {
      throw RejectError("geometric expansion overflows at level " + std::to_string(k + 1));
    }
  }
  return StaircaseProfile(std::move(q), std::move(a));
}

double fidelity_at(const StaircaseProfile& p, double quality) {
  require_positive_finite(quality, "quality Q");
  const auto q = p.q();
  const auto above = std::upper_bound(q.begin(), q.end(), quality);
  if (above == q.begin()) return 1.0;
  return p.level(static_cast<std::size_t>(above - q.begin()) - 1);
}

double distortion_at(const StaircaseProfile& p, double noise) {
  require_positive_finite(noise, "noise N");
  return 1.0 / fidelity_at(p, 1.0 / noise);
}

double truncation_tail(const GeometricSpec& spec, std::size_t levels) {
  validate_geometric(spec);
  return std::pow(spec.gamma, -static_cast<double>(levels)) * std::log(spec.lambda) / (spec.gamma - 1.0);
}

std::size_t truncation_level(const GeometricSpec& spec, double eps) {
  validate_geometric(spec);
  if (!spec.unbounded()) throw RejectError("truncation_level applies to an unbounded staircase");
  require_positive_finite(eps, "eps");
  const double head = std::log(spec.lambda) / (spec.gamma - 1.0);
  const double estimate = std::ceil(std::log(head / eps) / std::log(spec.gamma));
  auto k = static_cast<std::size_t>(std::max(1.0, estimate - 2.0));
  while (!(truncation_tail(spec, k) < eps)) ++k;
  while (k > 1 && truncation_tail(spec, k - 1) < eps) --k;
  return k;
}

}  // namespace edbound
