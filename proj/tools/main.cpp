#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"
#include "edbound/errors.hpp"

namespace {

struct RawFlags {
  std::string profile;
  std::string gamma;
  std::string lambda;
  std::string levels = "inf";
  std::string format = "json";
  std::string out;
  std::size_t points = 200;
  std::uint64_t seed = 1;
  double tol = -1.0;
};

void add_flags(CLI::App& sub, RawFlags& f) {
  sub.add_option("--profile", f.profile, "Profile JSON file");
  sub.add_option("--gamma", f.gamma, "Geometric ratio gamma, 'a' or 'a:b:n'");
  sub.add_option("--lambda", f.lambda, "Geometric ratio lambda, 'a' or 'a:b:n'");
  sub.add_option("--levels", f.levels, "Number of stairs or 'inf'");
  sub.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--out", f.out, "Output file (default: stdout)");
  sub.add_option("--points", f.points, "Samples per curve table");
  sub.add_option("--seed", f.seed, "Seed for the verification suite");
  sub.add_option("--tol", f.tol, "Override every agreement tolerance in verify");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = edbound::cli;
  CLI::App app{"Energy-distortion bounds for staircase profiles"};
  app.require_subcommand(1);
  RawFlags flags;
  auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds for one profile");
  auto* sweep = app.add_subcommand("sweep", "Geometric bounds over a gamma x lambda grid");
  auto* curve = app.add_subcommand("curve", "Achieved fidelity and energy-vs-e0 curves");
  auto* verify = app.add_subcommand("verify", "Closed forms against brute-force oracles");
  for (auto* sub : {bounds, sweep, curve, verify}) add_flags(*sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kMalformed;
  }

  cli::RunRequest req;
  if (*bounds) req.command = cli::Command::kBounds;
  if (*sweep) req.command = cli::Command::kSweep;
  if (*curve) req.command = cli::Command::kCurve;
  if (*verify) req.command = cli::Command::kVerify;

  try {
    if (!flags.profile.empty()) req.profile_path = flags.profile;
    if (!flags.gamma.empty()) req.gamma = cli::parse_range(flags.gamma);
    if (!flags.lambda.empty()) req.lambda = cli::parse_range(flags.lambda);
    req.levels = cli::parse_levels(flags.levels);
    req.format = flags.format == "csv" ? cli::Format::kCsv : cli::Format::kJson;
    if (!flags.out.empty()) req.output_path = flags.out;
    req.points = flags.points;
    req.oracle_config.seed = flags.seed;
    if (flags.tol >= 0.0) req.tol_override = flags.tol;
  } catch (const edbound::RejectError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kMalformed;
  }
  return cli::run(req, std::cout, std::cerr);
}
