#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace edbound {

/**
 * Staircase fidelity-quality profile.
 *
 * The requirement is F(Q) = a_k on [q_k, q_{k+1}), F(Q) = a_K for Q >= q_K and
 * F(Q) = 1 below the first breakpoint. Quality is inverse noise variance
 * (Q = 1/N) and fidelity is inverse distortion (F = 1/D).
 *
 * Instances are immutable and always satisfy: K >= 1, q strictly increasing and
 * positive, a strictly increasing with a_1 > 1.
 */
class StaircaseProfile {
 public:
  /// Throws RejectError when the invariants above do not hold.
  StaircaseProfile(std::vector<double> q, std::vector<double> a);

  [[nodiscard]] std::size_t levels() const { return q_.size(); }
  [[nodiscard]] std::span<const double> q() const { return q_; }
  [[nodiscard]] std::span<const double> a() const { return a_; }

  /// Breakpoint quality q_k, 0-based.
  [[nodiscard]] double quality(std::size_t k) const { return q_[k]; }
  /// Fidelity level a_k, 0-based.
  [[nodiscard]] double level(std::size_t k) const { return a_[k]; }
  /// Noise level N_k = 1/q_k, 0-based.
  [[nodiscard]] double noise(std::size_t k) const { return 1.0 / q_[k]; }

  friend bool operator==(const StaircaseProfile&, const StaircaseProfile&) = default;

 private:
  std::vector<double> q_;
  std::vector<double> a_;
};

/// Q_k = gamma^k, a_k = lambda^k for k = 1..levels; nullopt levels means unbounded.
struct GeometricSpec {
  double gamma = 2.0;
  double lambda = 2.0;
  std::optional<std::size_t> levels;

  [[nodiscard]] bool unbounded() const { return !levels.has_value(); }
};

StaircaseProfile make_staircase(std::vector<double> q, std::vector<double> a);

/// Throws RejectError unless gamma > 1, lambda > 1 and a finite level count is >= 1.
void validate_geometric(const GeometricSpec& spec);

/// Expands the first min(levels, levels_cap) stairs. Throws RejectError when a
/// power overflows double precision.
StaircaseProfile expand_geometric(const GeometricSpec& spec, std::size_t levels_cap);

/// Largest level count whose powers stay finite (and strictly increasing) in double.
std::size_t max_representable_levels(const GeometricSpec& spec);

double fidelity_at(const StaircaseProfile& p, double quality);
double distortion_at(const StaircaseProfile& p, double noise);

/// Smallest K such that gamma^{-K} ln(lambda) / (gamma - 1) < eps.
std::size_t truncation_level(const GeometricSpec& spec, double eps);

/// Tail gamma^{-K} ln(lambda) / (gamma - 1) dropped when truncating at K levels.
double truncation_tail(const GeometricSpec& spec, std::size_t levels);

}  // namespace edbound
