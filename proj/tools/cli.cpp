#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edbound/errors.hpp"
#include "edbound/lower_bounds.hpp"
#include "edbound/upper_bounds.hpp"
#include <nlohmann/json.hpp>
#include "table.hpp"

namespace edbound::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kCurveTailEps = 1e-9;
constexpr std::size_t kMaxExpandedLevels = 1000;

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw RejectError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw RejectError("not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw RejectError(std::string("profile needs array '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw RejectError(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw RejectError(std::string("profile needs number '") + key + "'");
  return j[key].get<double>();
}

struct Record {
  BoundResult bound;
  std::optional<double> e0_used;
};

ordered_json describe(const ProfileSource& src) {
  ordered_json j;
  if (const auto* p = std::get_if<StaircaseProfile>(&src)) {
    j["type"] = "staircase";
    j["q"] = ordered_json::array();
    j["a"] = ordered_json::array();
    for (double x : p->q()) j["q"].push_back(number_json(x));
    for (double x : p->a()) j["a"].push_back(number_json(x));
  } else {
    const auto& g = std::get<GeometricSpec>(src);
    j["type"] = "geometric";
    j["gamma"] = number_json(g.gamma);
    j["lambda"] = number_json(g.lambda);
    if (g.levels) {
      j["levels"] = *g.levels;
    } else {
      j["levels"] = "inf";
    }
  }
  return j;
}

const char* optimize_branch(const OptimizeReport& r) {
  if (r.degenerate) return "degenerate";
  if (r.e0_star == 0.0) return "digital";
  return r.e0_star < r.z ? "interior" : "capped";
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void write_gap(ordered_json& obj, double gap) {
  obj["gap"] = number_json(gap);
  obj["gap_infinite"] = std::isinf(gap);
}

void require_range_above_one(const Range& r, const char* name) {
  for (double x : {r.lo, r.hi}) {
    if (!std::isfinite(x) || x <= 1.0) throw RejectError(std::string(name) + " range must lie in (1, inf)");
  }
}

}  // namespace

std::vector<double> Range::values() const {
  if (count <= 1) return {lo};
  return linspace(lo, hi, count);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

ProfileSource parse_profile_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RejectError(std::string("malformed profile JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw RejectError("profile JSON needs a string 'type'");
  }
  const auto type = j["type"].get<std::string>();
  if (type == "staircase") {
    return make_staircase(number_array(j, "q"), number_array(j, "a"));
  }
  if (type == "geometric") {
    GeometricSpec spec{number_field(j, "gamma"), number_field(j, "lambda"), std::nullopt};
    if (!j.contains("levels")) throw RejectError("geometric profile needs 'levels'");
    const auto& levels = j["levels"];
    if (levels.is_string()) {
      spec.levels = parse_levels(levels.get<std::string>());
    } else if (levels.is_number_integer() && levels.get<long long>() >= 1) {
      spec.levels = levels.get<std::size_t>();
    } else {
      throw RejectError("'levels' must be a positive integer or \"inf\"");
    }
    validate_geometric(spec);
    return spec;
  }
  throw RejectError("unknown profile type '" + type + "'");
}

Range parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) {
    const double v = parse_double(parts[0]);
    return {v, v, 1};
  }
  if (parts.size() != 3) throw RejectError("range must be 'a' or 'a:b:n'");
  Range r{parse_double(parts[0]), parse_double(parts[1]), parse_count(parts[2])};
  if (r.count < 2) throw RejectError("range step count must be >= 2");
  if (r.hi < r.lo) throw RejectError("range end must not precede its start");
  return r;
}

std::optional<std::size_t> parse_levels(std::string_view text) {
  if (text == "inf") return std::nullopt;
  const auto k = parse_count(text);
  if (k < 1) throw RejectError("levels must be >= 1 or 'inf'");
  return k;
}

ProfileSource load_profile(const RunRequest& req) {
  if (req.profile_path) {
    std::ifstream in(*req.profile_path);
    if (!in) throw RejectError("cannot read profile file '" + *req.profile_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_profile_json(buf.str());
  }
  if (req.gamma && req.lambda) {
    if (req.gamma->count != 1 || req.lambda->count != 1) {
      throw RejectError("inline geometric profile takes single --gamma/--lambda values");
    }
    GeometricSpec spec{req.gamma->lo, req.lambda->lo, req.levels};
    validate_geometric(spec);
    return spec;
  }
  throw RejectError("a profile is required: --profile <path> or --gamma/--lambda/--levels");
}

StaircaseProfile finite_profile(const ProfileSource& src, double tail_eps) {
  if (const auto* p = std::get_if<StaircaseProfile>(&src)) return *p;
  const auto& spec = std::get<GeometricSpec>(src);
  if (spec.levels) return expand_geometric(spec, *spec.levels);
  const auto cap = std::min({truncation_level(spec, tail_eps), max_representable_levels(spec), kMaxExpandedLevels});
  return expand_geometric(spec, cap);
}

int cmd_bounds(const RunRequest& req, std::ostream& out) {
  const auto src = load_profile(req);
  std::vector<Record> records;
  const auto* geo = std::get_if<GeometricSpec>(&src);

  if (geo && geo->unbounded()) {
    records.push_back({thm3_geometric_lower(*geo), std::nullopt});
    records.push_back({thm4_geometric_upper(*geo), std::nullopt});
  } else {
    const auto p = finite_profile(src, kCurveTailEps);
    records.push_back({lemma1_breakpoint_bound(p), std::nullopt});

    if (geo) {
      const double partial = thm3_partial_sum(*geo, p.levels());
      records.push_back({{std::max(0.0, partial), Direction::kLower, "thm3_partial",
                          partial > 0.0 ? "unclamped" : "clamped"},
                         std::nullopt});
    }
    if (p.levels() == 2) {
      records.push_back({thm5_two_level_lower(p.noise(0), p.noise(1), p.level(0), p.level(1)), std::nullopt});
    }
    records.push_back({digital_only_energy(p), 0.0});

    const auto opt = optimize_e0(p);
    records.push_back({{opt.energy, Direction::kUpper, "optimize_e0", optimize_branch(opt)}, opt.e0_used});
    if (p.levels() == 2) {
      const auto closed = thm6_two_level(p.noise(0), p.noise(1), p.level(0), p.level(1));
      records.push_back({{closed.energy, Direction::kUpper, "thm6",
                          closed.e0_star < closed.z ? "interior" : "capped"},
                         closed.e0_used});
    }
  }

  double best_lower = 0.0;
  double best_upper = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.bound.direction == Direction::kLower) {
      best_lower = std::max(best_lower, r.bound.energy);
    } else {
      best_upper = std::min(best_upper, r.bound.energy);
    }
  }
  if (!std::isfinite(best_upper)) return kDegenerate;
  const double gap = best_lower > 0.0 ? best_upper / best_lower : std::numeric_limits<double>::infinity();

  Table table{{"method", "direction", "energy", "branch", "e0_used"}, {}};
  for (const auto& r : records) {
    table.rows.push_back({r.bound.method, std::string(to_string(r.bound.direction)), r.bound.energy,
                          r.bound.branch ? Cell{*r.bound.branch} : Cell{},
                          r.e0_used ? Cell{*r.e0_used} : Cell{}});
  }
  Table summary{{"best_lower", "best_upper", "gap"}, {{best_lower, best_upper, gap}}};

  if (req.format == Format::kCsv) {
    write_csv(out, table);
    out << '\n';
    write_csv(out, summary);
  } else {
    ordered_json j;
    j["command"] = "bounds";
    j["profile"] = describe(src);
    j["records"] = to_json(table);
    ordered_json s;
    s["best_lower"] = number_json(best_lower);
    s["best_upper"] = number_json(best_upper);
    write_gap(s, gap);
    j["summary"] = std::move(s);
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_sweep(const RunRequest& req, std::ostream& out) {
  if (!req.gamma || !req.lambda) throw RejectError("sweep needs --gamma and --lambda ranges");
  require_range_above_one(*req.gamma, "gamma");
  require_range_above_one(*req.lambda, "lambda");

  Table table{{"gamma", "lambda", "lower_thm3", "upper_thm4", "z_geometric", "gap"}, {}};
  std::vector<bool> infinite_gap;
  for (double g : req.gamma->values()) {
    for (double l : req.lambda->values()) {
      const GeometricSpec spec{g, l, req.levels};
      double lower = 0.0;
      double upper = 0.0;
      if (spec.unbounded()) {
        lower = thm3_geometric_lower(spec).energy;
        upper = thm4_geometric_upper(spec).energy;
      } else {
        lower = std::max(0.0, thm3_partial_sum(spec, *spec.levels));
        upper = thm4_partial_sum(spec, *spec.levels);
      }
      const double gap = lower > 0.0 ? upper / lower : std::numeric_limits<double>::infinity();
      table.rows.push_back({g, l, lower, upper, geometric_z(spec), gap});
      infinite_gap.push_back(std::isinf(gap));
    }
  }

  if (req.format == Format::kCsv) {
    write_csv(out, table);
  } else {
    ordered_json j;
    j["command"] = "sweep";
    if (req.levels) {
      j["levels"] = *req.levels;
    } else {
      j["levels"] = "inf";
    }
    j["rows"] = to_json(table);
    for (std::size_t i = 0; i < infinite_gap.size(); ++i) j["rows"][i]["gap_infinite"] = static_cast<bool>(infinite_gap[i]);
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_curve(const RunRequest& req, std::ostream& out) {
  if (req.points < 2) throw RejectError("--points must be >= 2");
  const auto src = load_profile(req);
  const auto p = finite_profile(src, kCurveTailEps);
  const auto* geo = std::get_if<GeometricSpec>(&src);
  const bool truncated = geo && geo->unbounded();

  auto opt = optimize_e0(p);
  bool degenerate = opt.degenerate;
  if (truncated && geometric_z(*geo) == 0.0) {
    // The unbounded staircase admits only e0 = 0; the truncation's cap is spurious.
    degenerate = true;
    opt.z = 0.0;
  }
  const double e0_used = degenerate ? 0.0 : opt.e0_used;
  const SchemeConfig scheme{e0_used, beta_star(p, e0_used)};

  const double q_first = p.quality(0);
  const double q_last = p.quality(p.levels() - 1);
  std::vector<double> qs(req.points);
  const double log_lo = std::log(q_first / 10.0);
  const double log_hi = std::log(10.0 * q_last);
  for (std::size_t i = 0; i < req.points; ++i) {
    qs[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / static_cast<double>(req.points - 1));
  }
  // Grid points that would print identically to a breakpoint are dropped so the
  // exact breakpoint row is the only one at that Q.
  std::erase_if(qs, [&](double x) {
    return std::any_of(p.q().begin(), p.q().end(), [&](double q) { return std::abs(x - q) <= 1e-9 * q; });
  });
  qs.insert(qs.end(), p.q().begin(), p.q().end());
  sort_unique(qs);

  Table fidelity{{"q", "profile_f", "achieved_f"}, {}};
  for (double x : qs) fidelity.rows.push_back({x, fidelity_at(p, x), achieved_fidelity(p, scheme, x)});

  Table energy{{"e0", "total_energy", "minimizer"}, {}};
  if (degenerate) {
    energy.rows.push_back({0.0, total_energy_unchecked(p, 0.0), true});
  } else {
    auto grid = linspace(0.0, opt.z, req.points);
    grid.push_back(e0_used);
    sort_unique(grid);
    for (double e0 : grid) energy.rows.push_back({e0, total_energy(p, e0), e0 == e0_used});
  }
  const std::string note = degenerate ? "degenerate: Z = 0, only the digital-only scheme (e0 = 0) is admissible" : "";

  if (req.format == Format::kCsv) {
    write_csv(out, fidelity);
    out << '\n';
    write_csv(out, energy);
    if (degenerate) {
      out << '\n';
      write_csv(out, Table{{"note"}, {{note}}});
    }
  } else {
    ordered_json j;
    j["command"] = "curve";
    j["profile"] = describe(src);
    j["levels"] = p.levels();
    j["truncated"] = truncated;
    j["z"] = number_json(opt.z);
    j["e0_used"] = number_json(e0_used);
    j["energy"] = number_json(total_energy_unchecked(p, e0_used));
    j["degenerate"] = degenerate;
    if (degenerate) j["note"] = note;
    j["fidelity"] = to_json(fidelity);
    j["energy_curve"] = to_json(energy);
    out << j.dump(2) << '\n';
  }
  return degenerate ? kDegenerate : kOk;
}

int run(const RunRequest& req, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (req.output_path) {
    file.open(*req.output_path);
    if (!file) {
      err << "error: cannot open output file '" << *req.output_path << "'\n";
      return kMalformed;
    }
    sink = &file;
  }
  try {
    switch (req.command) {
      case Command::kBounds: return cmd_bounds(req, *sink);
      case Command::kSweep: return cmd_sweep(req, *sink);
      case Command::kCurve: return cmd_curve(req, *sink);
      case Command::kVerify: return cmd_verify(req, *sink);
    }
  } catch (const RejectError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kDegenerate;
  }
  return kMalformed;
}

}  // namespace edbound::cli
