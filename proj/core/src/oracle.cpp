#include "edbound/oracle.hpp"

#include <cmath>
#include <limits>

#include "edbound/errors.hpp"
#include "edbound/upper_bounds.hpp"

namespace edbound::oracle {

namespace {

std::vector<double> geomspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

// Two-level instance of the bound family with tau_2 = 0 and D_k = 1/a_k,
// written out from the general K-term expression.
double tau_objective(double n1, double n2, double a1, double a2, double tau) {
  const double d1 = 1.0 / a1;
  const double d2 = 1.0 / a2;
  const double first = n1 * std::log((1.0 + tau) / (d1 + tau));
  const double second = n2 * std::log((1.0 + 0.0) * (d2 + tau) / ((1.0 + tau) * (d2 + 0.0)));
  return first + second;
}

void record(Verdict& v, double margin, bool ok) {
  if (v.evaluated == 0 || margin < v.worst_margin) v.worst_margin = margin;
  v.pass = v.pass && ok;
  ++v.evaluated;
}

// Random beta at or above the corner that keeps the chain increasing.
std::vector<double> perturbed_beta(const std::vector<double>& corner, double scale, std::mt19937_64& rng) {
  std::vector<double> beta(corner.size());
  for (std::size_t k = 0; k < corner.size(); ++k) {
    const double u = unit_uniform(rng);
    beta[k] = corner[k] + scale * u * u * u;
    if (k > 0) beta[k] = std::max(beta[k], beta[k - 1] + (corner[k] - corner[k - 1]));
  }
  return beta;
}

}  // namespace

void validate(const OracleConfig& cfg) {
  if (cfg.grid_points < 3) throw RejectError("grid_points must be >= 3");
  if (cfg.samples < 1) throw RejectError("samples must be >= 1");
  if (!std::isfinite(cfg.tol) || cfg.tol <= 0.0) throw RejectError("oracle tol must be positive");
}

TauSearch grid_max_tau1(double n1, double n2, double a1, double a2, const OracleConfig& cfg) {
  validate(cfg);
  const auto f = [&](double tau) { return tau_objective(n1, n2, a1, a2, tau); };
  const double limit = n2 * std::log(a2);

  double tau_hi = 1.0;
  while (std::abs(f(tau_hi) - limit) > cfg.tol && tau_hi < 1e300) tau_hi *= 2.0;

  std::vector<double> grid{0.0};
  const auto tail = geomspace(std::min(1e-9, tau_hi * 1e-9), tau_hi, cfg.grid_points);
  grid.insert(grid.end(), tail.begin(), tail.end());

  const auto argmax = [&](const std::vector<double>& pts) {
    std::size_t best = 0;
    double best_val = f(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double v = f(pts[i]);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    return best;
  };

  std::size_t best = argmax(grid);
  TauSearch result{grid[best], f(grid[best])};
  for (int round = 0; round < 3; ++round) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    if (!(hi > lo)) break;
    grid = linspace(lo, hi, cfg.grid_points);
    best = argmax(grid);
    const double v = f(grid[best]);
    if (v > result.value) result = {grid[best], v};
  }
  return result;
}

GoldenResult golden_min_e0(const StaircaseProfile& p, const OracleConfig& cfg) {
  validate(cfg);
  const double z = e0_feasible_max(p);
  if (!(z > 0.0)) return {0.0, total_energy_unchecked(p, 0.0), 0, true};

  const auto f = [&](double e0) { return total_energy(p, e0); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = z;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iterations = 0;
  while (b - a > z * 1e-10) {
    ++iterations;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  GoldenResult result{0.5 * (a + b), f(0.5 * (a + b)), iterations, false};
  for (double edge : {0.0, z}) {
    const double fe = f(edge);
    if (fe < result.energy) {
      result.e0 = edge;
      result.energy = fe;
    }
  }
  return result;
}

double corner_margin(const StaircaseProfile& p, double e0, const std::vector<double>& beta) {
  const auto corner = beta_star(p, e0);
  return digital_energy(p, e0, beta) - digital_energy(p, e0, corner);
}

Verdict sample_beta_feasible(const StaircaseProfile& p, double e0, const OracleConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  const auto corner = beta_star(p, e0);
  const double corner_energy = digital_energy(p, e0, corner);
  const double slack = 1e-12 * (1.0 + std::abs(corner_energy));
  const double scale = p.level(p.levels() - 1);

  Verdict verdict;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const auto beta = perturbed_beta(corner, scale, rng);
    const double margin = digital_energy(p, e0, beta) - corner_energy;
    record(verdict, margin, margin >= -slack);
  }
  return verdict;
}

FiniteDiffReport finite_diff_check(const StaircaseProfile& p, const OracleConfig& cfg) {
  validate(cfg);
  const double z = e0_feasible_max(p);
  if (!(z > 0.0)) throw RejectError("finite_diff_check needs Z > 0");

  std::mt19937_64 rng(cfg.seed);
  const auto energy = [&](double e0) { return total_energy_unchecked(p, e0); };
  FiniteDiffReport report;

  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const double e0 = uniform(rng, 0.0, z);
    const double h = fd_step(e0);
    // Centered stencil needs e0 - h >= 0.
    const double x = std::max(e0, h);

    const double analytic = total_energy_derivative_unchecked(p, x);
    const double centered = (energy(x + h) - energy(x - h)) / (2.0 * h);
    const double rel = std::abs(centered - analytic) / std::max(1.0, std::abs(analytic));
    record(report.derivative_match, -rel, rel <= 1e-6);

    const double second = energy(x + h) - 2.0 * energy(x) + energy(x - h);
    record(report.convexity_e0, second, second >= -1e-9);

    const double e0_beta = std::min(e0, z);
    const auto corner = beta_star(p, e0_beta);
    auto beta = perturbed_beta(corner, p.level(p.levels() - 1), rng);
    for (std::size_t k = 0; k < beta.size(); ++k) {
      const double hb = fd_step(beta[k]);
      const double mid = digital_energy(p, e0_beta, beta);
      beta[k] += hb;
      const double up = digital_energy(p, e0_beta, beta);
      beta[k] -= 2.0 * hb;
      const double down = digital_energy(p, e0_beta, beta);
      beta[k] += hb;

      const double curvature = up - 2.0 * mid + down;
      record(report.concavity_beta, -curvature, curvature <= 1e-9);
      const double rise = up - down;
      record(report.increasing_beta, rise, rise > 0.0);
    }
  }
  return report;
}

StaircaseProfile random_profile(std::mt19937_64& rng, std::size_t max_levels) {
  if (max_levels < 1) throw RejectError("max_levels must be >= 1");
  const auto levels = 1 + static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(max_levels));
  std::vector<double> q(levels);
  std::vector<double> a(levels);
  q[0] = uniform(rng, 0.2, 2.0);
  a[0] = uniform(rng, 1.05, 4.0);
  for (std::size_t k = 1; k < levels; ++k) {
    q[k] = q[k - 1] * uniform(rng, 1.2, 4.0);
    a[k] = a[k - 1] * uniform(rng, 1.1, 2.0);
  }
  return StaircaseProfile(std::move(q), std::move(a));
}

TwoLevelInstance random_two_level(std::mt19937_64& rng, TauBranch target) {
  TwoLevelInstance inst;
  inst.n1 = uniform(rng, 0.5, 2.0);
  inst.a1 = 1.0 + uniform(rng, 0.1, 4.0);
  inst.a2 = inst.a1 * uniform(rng, 1.2, 6.0);
  inst.branch = target;
  const double lower_cut = (inst.a1 - 1.0) / (inst.a2 - 1.0);
  const double upper_cut = inst.a2 * (inst.a1 - 1.0) / (inst.a1 * (inst.a2 - 1.0));
  const double u = uniform(rng, 0.02, 0.98);
  double ratio = 0.0;
  switch (target) {
    case TauBranch::kInterior: ratio = lower_cut + (upper_cut - lower_cut) * u; break;
    case TauBranch::kInfinity: ratio = upper_cut + (1.0 - upper_cut) * u; break;
    case TauBranch::kZero: ratio = lower_cut * u; break;
  }
  inst.n2 = ratio * inst.n1;
  return inst;
}

ScheduleSearch lemma1_search(const StaircaseProfile& p, std::size_t levels, const OracleConfig& cfg) {
  validate(cfg);
  if (levels < 1 || levels > 3) throw RejectError("lemma1_search supports 1 <= K <= 3");

  const std::size_t last = p.levels() - 1;
  std::vector<double> n_grid = geomspace(0.5 * p.noise(last), 2.0 * p.noise(0), cfg.grid_points);
  for (std::size_t j = 0; j <= last; ++j) n_grid.push_back(p.noise(j));
  std::sort(n_grid.begin(), n_grid.end());
  std::vector<double> tau_grid{0.0};
  const auto taus = geomspace(1e-6, 1e3, cfg.grid_points);
  tau_grid.insert(tau_grid.end(), taus.begin(), taus.end());

  const auto evaluate = [&](const LowerBoundSchedule& s) {
    std::vector<double> d(levels);
    for (std::size_t k = 0; k < levels; ++k) d[k] = distortion_at(p, s.n_seq[k]);
    return lemma1_value(d, s);
  };

  const auto ascend = [&](LowerBoundSchedule s) {
    double value = evaluate(s);
    for (int sweep = 0; sweep < 100; ++sweep) {
      bool improved = false;
      for (std::size_t k = 0; k < levels; ++k) {
        const double n_hi = k == 0 ? std::numeric_limits<double>::infinity() : s.n_seq[k - 1];
        const double n_lo = k + 1 < levels ? s.n_seq[k + 1] : 0.0;
        for (double cand : n_grid) {
          if (cand > n_hi || cand < n_lo) continue;
          LowerBoundSchedule trial = s;
          trial.n_seq[k] = cand;
          const double v = evaluate(trial);
          if (v > value + 1e-15) {
            s = std::move(trial);
            value = v;
            improved = true;
          }
        }
        if (k + 1 == levels) continue;  // tau_K stays 0
        const double t_hi = k == 0 ? std::numeric_limits<double>::infinity() : s.tau_seq[k - 1];
        const double t_lo = s.tau_seq[k + 1];
        for (double cand : tau_grid) {
          if (cand > t_hi || cand < t_lo) continue;
          LowerBoundSchedule trial = s;
          trial.tau_seq[k] = cand;
          const double v = evaluate(trial);
          if (v > value + 1e-15) {
            s = std::move(trial);
            value = v;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
    return ScheduleSearch{std::move(s), value};
  };

  // Breakpoint start with tau_k = D(N_k).
  LowerBoundSchedule start;
  for (std::size_t k = 0; k < levels; ++k) {
    start.n_seq.push_back(p.noise(std::min(k, last)));
    start.tau_seq.push_back(k + 1 < levels ? distortion_at(p, start.n_seq.back()) : 0.0);
  }
  ScheduleSearch best = ascend(start);

  std::mt19937_64 rng(cfg.seed);
  const std::size_t restarts = std::min<std::size_t>(cfg.samples, 8);
  for (std::size_t r = 0; r < restarts; ++r) {
    LowerBoundSchedule s;
    for (std::size_t k = 0; k < levels; ++k) {
      s.n_seq.push_back(n_grid[static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n_grid.size()))]);
      s.tau_seq.push_back(k + 1 < levels ? tau_grid[static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(tau_grid.size()))] : 0.0);
    }
    std::sort(s.n_seq.rbegin(), s.n_seq.rend());
    std::sort(s.tau_seq.rbegin(), s.tau_seq.rend());
    auto found = ascend(std::move(s));
    if (found.value > best.value) best = std::move(found);
  }
  return best;
}

}  // namespace edbound::oracle
