#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffif/commands.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> lambdas;
  std::optional<double> tol;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> levels;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_depth;
};

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ffif::Error(ffif::ErrorCode::InvalidArgument, "bad lambda '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

ffif::RunConfig load(const Overrides& o) {
  ffif::RunConfig c = ffif::load_config(o.config);
  if (o.out) c.output_dir = *o.out;
  if (o.lambdas) c.lambdas = parse_lambdas(*o.lambdas);
  if (o.tol) c.tol = *o.tol;
  if (o.grid) c.grid = *o.grid;
  if (o.levels) c.levels = *o.levels;
  if (o.seed) c.seed = *o.seed;
  if (o.max_depth) c.max_depth = *o.max_depth;
  ffif::validate_config(c);
  return c;
}

void report_written(const ffif::ExportBundle& b, const std::string& dir) {
  for (const auto& t : b.tables) std::cout << "wrote " << dir << "/" << t.name << "\n";
  std::cout << "wrote " << dir << "/manifest.json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-valued fractal interpolation functions"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "Run configuration (JSON)")->required();
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--lambdas", o.lambdas, "Comma-separated membership levels");
  app.add_option("--tol", o.tol, "RB iteration tolerance");
  app.add_option("--grid", o.grid, "Evaluation grid steps N");
  app.add_option("--levels", o.levels, "Level grid steps M");
  app.add_option("--seed", o.seed, "Seed for randomized checks");
  app.add_option("--max-depth", o.max_depth, "Maximum RB iterations");

  auto* validate = app.add_subcommand("validate", "Validate data, IFS, matching and contraction");
  auto* build = app.add_subcommand("build", "Compute the FIF and write fif_samples.csv");
  auto* levels = app.add_subcommand("levels", "Write level curves next to independent scalar FIFs");
  auto* holder = app.add_subcommand("holder", "Hölder constants, verification and empirical exponent");
  auto* all = app.add_subcommand("export", "build, levels and holder in one bundle");
  for (auto* sub : {validate, build, levels, holder, all}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: INVALID_ARGUMENT: " << e.what() << "\n";
    return 2;
  }

  try {
    const ffif::RunConfig config = load(o);
    if (validate->parsed()) {
      const ffif::ValidationReport r = ffif::cmd_validate(config);
      std::cout << r.summary();
      if (!r.pass) {
        const auto code = r.first_error().value_or(ffif::ErrorCode::MatchingNotVerified);
        std::cerr << "error: " << ffif::to_string(code) << ": validation failed\n";
        return ffif::exit_status(code);
      }
      return 0;
    }
    if (build->parsed()) {
      const auto b = ffif::cmd_build(config);
      ffif::write_bundle(b, config.output_dir);
      report_written(b, config.output_dir);
      std::cout << "depth " << b.manifest["run"]["depth"] << ", residual "
                << b.manifest["run"]["residual"] << "\n";
      return 0;
    }
    if (levels->parsed()) {
      const auto b = ffif::cmd_levels(config, config.lambdas);
      ffif::write_bundle(b, config.output_dir);
      report_written(b, config.output_dir);
      for (const auto& l : b.manifest["levels"]) {
        std::cout << "lambda " << l["lambda"] << ": max gap " << l["max_gap"] << "\n";
      }
      return 0;
    }
    if (holder->parsed()) {
      const ffif::HolderOutcome h = ffif::cmd_holder(config);
      ffif::ExportBundle b;
      b.manifest = {{"command", "holder"}, {"config", nlohmann::json::parse(ffif::serialize_config(config))}};
      b.add_table("holder_report.json", h.to_json().dump(2) + "\n");
      ffif::write_bundle(b, config.output_dir);
      std::cout << h.summary;
      return h.verdict.pass ? 0 : 2;
    }
    const auto b = ffif::cmd_export(config);
    ffif::write_bundle(b, config.output_dir);
    report_written(b, config.output_dir);
    return 0;
  } catch (const ffif::Error& e) {
    std::cerr << "error: " << ffif::to_string(e.code()) << ": " << e.what() << "\n";
    return ffif::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: IO_ERROR: " << e.what() << "\n";
    return 4;
  }
}
