#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edbound/oracle.hpp"
#include "edbound/profile.hpp"

namespace edbound::cli {

enum class Command { kBounds, kSweep, kCurve, kVerify };
enum class Format { kJson, kCsv };

/// Exit codes of the edbound executable.
enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kMalformed = 2, kDegenerate = 3 };

/// Inclusive linear range; count == 1 denotes the single value lo.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  [[nodiscard]] std::vector<double> values() const;
};

struct RunRequest {
  Command command = Command::kBounds;
  std::optional<std::string> profile_path;
  std::optional<Range> gamma;
  std::optional<Range> lambda;
  std::optional<std::size_t> levels;  ///< nullopt: unbounded
  Format format = Format::kJson;
  std::optional<std::string> output_path;
  std::size_t points = 200;
  oracle::OracleConfig oracle_config{};
  std::optional<double> tol_override;  ///< replaces every agreement tolerance in verify
};

using ProfileSource = std::variant<StaircaseProfile, GeometricSpec>;

/// {"type":"staircase","q":[...],"a":[...]} or
/// {"type":"geometric","gamma":g,"lambda":l,"levels":k|"inf"}. Throws RejectError.
ProfileSource parse_profile_json(std::string_view text);

/// "a" or "a:b:n" with n >= 2. Throws RejectError.
Range parse_range(std::string_view text);

/// Positive integer or "inf". Throws RejectError.
std::optional<std::size_t> parse_levels(std::string_view text);

/// Profile from --profile, else from single-valued --gamma/--lambda/--levels.
ProfileSource load_profile(const RunRequest& req);

/// Finite profile used for schemes that need explicit stairs; unbounded geometric
/// specs are truncated where the dropped tail falls below tail_eps.
StaircaseProfile finite_profile(const ProfileSource& src, double tail_eps);

/// 12 significant digits.
std::string format_number(double x);
/// x rounded through format_number, so JSON and CSV carry identical values.
double round12(double x);

int cmd_bounds(const RunRequest& req, std::ostream& out);
int cmd_sweep(const RunRequest& req, std::ostream& out);
int cmd_curve(const RunRequest& req, std::ostream& out);
int cmd_verify(const RunRequest& req, std::ostream& out);

/// Dispatches req.command, writes to req.output_path or out, and maps errors to
/// exit codes. Diagnostics go to err.
int run(const RunRequest& req, std::ostream& out, std::ostream& err);

}  // namespace edbound::cli
