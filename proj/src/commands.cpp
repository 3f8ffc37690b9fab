#include "ffif/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ffif/fif.hpp"

namespace ffif {

using nlohmann::json;

namespace {

json matching_json(const MatchingReport& m) {
  return {{"tolerance", m.tolerance}, {"left", m.left}, {"right", m.right},
          {"worst", m.worst()}, {"pass", m.pass}};
}

json run_json(const FuzzyFif& fif) {
  return {{"depth", fif.depth()},
          {"residual", fif.residual()},
          {"error_bound", fif.error_bound()},
          {"samples", fif.sample_count()},
          {"matching", matching_json(fif.matching())}};
}

json base_manifest(const RunConfig& config, const char* command) {
  return {{"command", command}, {"config", json::parse(serialize_config(config))}};
}

std::string lambda_label(double lambda) { return format_double(lambda); }

std::size_t exponent_scales(const FuzzyFif& fif) {
  const auto xs = fif.xs();
  double spacing = 0.0;
  for (std::size_t j = 1; j < xs.size(); ++j) spacing = std::max(spacing, xs[j] - xs[j - 1]);
  const double room = std::floor(std::log2((xs.back() - xs.front()) / spacing));
  // Too coarse a grid falls through to InsufficientResolution.
  return static_cast<std::size_t>(std::clamp(room - 3.0, 4.0, 6.0));
}

}  // namespace

std::optional<ErrorCode> ValidationReport::first_error() const {
  for (const auto& c : checks) {
    if (!c.pass) return c.error;
  }
  return std::nullopt;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (c.error) out << " [" << to_string(*c.error) << "]";
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  out << (pass ? "PASS" : "FAIL") << '\n';
  return out.str();
}

json ValidationReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks) {
    json item = {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
    if (c.error) item["error"] = std::string(to_string(*c.error));
    list.push_back(item);
  }
  return {{"pass", pass}, {"checks", list}};
}

ValidationReport cmd_validate(const RunConfig& config) {
  ValidationReport report;
  auto stage = [&report](const std::string& name, auto&& body) {
    CheckResult r;
    r.name = name;
    try {
      std::tie(r.pass, r.detail) = body();
    } catch (const Error& e) {
      r.pass = false;
      r.error = e.code();
      r.detail = e.what();
    }
    report.checks.push_back(r);
    return r.pass;
  };

  std::shared_ptr<const IfsSystem> sys;
  const bool ok =
      stage("config",
            [&] {
              validate_config(config);
              return std::pair{true, std::to_string(config.knots.size() - 1) + " intervals"};
            }) &&
      stage("membership",
            [&] {
              const GridPtr grid = make_level_grid(config);
              for (const auto& spec : config.values) from_membership(spec, grid);
              return std::pair{true, std::to_string(config.values.size()) + " fuzzy values on " +
                                         std::to_string(grid->size()) + " levels"};
            }) &&
      stage("ifs",
            [&] {
              sys = make_system(config);
              std::ostringstream d;
              d << "s = " << sys->s_max() << ", c_min = " << sys->c_min()
                << ", rho = " << sys->rho();
              return std::pair{true, d.str()};
            }) &&
      stage("matching",
            [&] {
              const MatchingReport m = check_matching(*sys);
              std::ostringstream d;
              d << "worst residual " << m.worst() << " (tolerance " << m.tolerance << ")";
              for (std::size_t k = 0; k < m.left.size(); ++k) {
                d << "; map " << k << " left " << m.left[k] << " right " << m.right[k];
              }
              if (!m.pass) throw Error(ErrorCode::MatchingNotVerified, d.str());
              return std::pair{true, d.str()};
            });
  // The contraction check does not depend on matching, so it runs either way.
  const bool contracts =
      sys != nullptr && stage("contraction", [&] {
        const ThetaMetricParams params = midpoint_theta_params(*sys);
        const ContractionReport c =
            verify_theta_contraction(*sys, params, config.contraction_trials, config.seed);
        std::ostringstream d;
        d << "theta = " << params.theta << ", " << c.trials << " trials, " << c.violations
          << " violations, " << c.sandwich_violations << " sandwich violations";
        return std::pair{c.pass, d.str()};
      });
  report.pass = ok && contracts;
  return report;
}

FuzzyFif build_fif(const RunConfig& config) {
  validate_config(config);
  return iterate_rb(make_system(config), make_rb_options(config));
}

std::vector<double> normalized_lambdas(std::vector<double> lambdas) {
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  return lambdas;
}

ExportBundle cmd_build(const RunConfig& config) { return cmd_build(config, build_fif(config)); }

ExportBundle cmd_build(const RunConfig& config, const FuzzyFif& fif) {
  ExportBundle bundle;
  bundle.manifest = base_manifest(config, "build");
  bundle.manifest["run"] = run_json(fif);

  const auto lambdas = normalized_lambdas(config.lambdas);
  std::vector<std::string> header{"x"};
  std::vector<std::vector<double>> columns{{fif.xs().begin(), fif.xs().end()}};
  for (const double lambda : lambdas) {
    LevelCurvePair curves = extract_level(fif, lambda);
    header.push_back("lower@" + lambda_label(lambda));
    header.push_back("upper@" + lambda_label(lambda));
    columns.push_back(std::move(curves.lower));
    columns.push_back(std::move(curves.upper));
  }
  bundle.add_table("fif_samples.csv", to_csv(header, columns));
  return bundle;
}

ExportBundle cmd_levels(const RunConfig& config, std::vector<double> lambdas) {
  return cmd_levels(config, build_fif(config), std::move(lambdas));
}

ExportBundle cmd_levels(const RunConfig& config, const FuzzyFif& fif, std::vector<double> lambdas) {
  ExportBundle bundle;
  bundle.manifest = base_manifest(config, "levels");
  bundle.manifest["run"] = run_json(fif);
  bundle.manifest["gap_tolerance"] = kLevelGapTolerance;
  json levels = json::array();
  for (const double lambda : normalized_lambdas(std::move(lambdas))) {
    const LevelCurvePair curves = extract_level(fif, lambda);
    const ScalarLevelPair scalar = scalar_level_fifs(fif, lambda, !config.allow_unmatched);
    const std::size_t count = curves.xs.size();
    std::vector<double> s_lo(count), s_hi(count), gap(count);
    double worst = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      s_lo[j] = scalar.lower(curves.xs[j]);
      s_hi[j] = scalar.upper(curves.xs[j]);
      gap[j] = std::max(std::abs(curves.lower[j] - s_lo[j]), std::abs(curves.upper[j] - s_hi[j]));
      worst = std::max(worst, gap[j]);
    }
    const std::string name = "levels_" + lambda_label(lambda) + ".csv";
    const std::vector<std::string> header{"x", "fuzzy_lower", "fuzzy_upper", "scalar_lower",
                                          "scalar_upper", "gap"};
    const std::vector<std::vector<double>> columns{curves.xs, curves.lower, curves.upper,
                                                   s_lo, s_hi, gap};
    bundle.add_table(name, to_csv(header, columns));
    const double matching = std::max(scalar.lower.matching_residual(), scalar.upper.matching_residual());
    levels.push_back({{"lambda", lambda},
                      {"file", name},
                      {"max_gap", worst},
                      {"gap_ok", worst <= kLevelGapTolerance},
                      {"scalar_matching_residual", matching},
                      {"scalar_matching_ok", matching <= fif.options().matching_tol}});
  }
  bundle.manifest["levels"] = levels;
  return bundle;
}

json HolderOutcome::to_json() const {
  const auto& c = constants;
  return {{"constants",
           {{"A", c.A}, {"rho", c.rho}, {"c_min", c.c_min}, {"c_max", c.c_max}, {"s", c.s},
            {"delta", c.delta}, {"alpha", c.alpha}, {"M", c.M}, {"tau", c.tau}, {"Q", c.Q},
            {"K", c.K}, {"H_f", c.H_f}, {"case", std::string(to_string(c.regime))}}},
          {"empirical",
           {{"scales", empirical.scales},
            {"oscillations", empirical.oscillations},
            {"fitted_exponent", empirical.fitted_exponent},
            {"fit_residual", empirical.fit_residual}}},
          {"verify",
           {{"pairs", verdict.pairs},
            {"violations", verdict.violations},
            {"max_ratio", verdict.max_ratio},
            {"worst_pair", {verdict.worst_x, verdict.worst_xp}},
            {"pass", verdict.pass}}}};
}

HolderOutcome cmd_holder(const RunConfig& config) { return cmd_holder(config, build_fif(config)); }

HolderOutcome cmd_holder(const RunConfig& config, const FuzzyFif& fif) {
  const IfsSystem& sys = fif.system();
  HolderOutcome out;
  out.constants = hoelder_constants(sys, data_bound(sys.data()), sys.rho(), config.tau_boundary);
  out.empirical = estimate_exponent(fif, exponent_scales(fif));
  out.verdict = verify_hoelder_bound(fif, out.constants, config.holder_pairs, config.seed);

  const auto& c = out.constants;
  std::ostringstream s;
  s.precision(12);
  s << "case " << to_string(c.regime) << ": delta = " << c.delta << ", tau = " << c.tau
    << ", H_f = " << c.H_f << "\n"
    << "empirical exponent " << out.empirical.fitted_exponent << " (fit residual "
    << out.empirical.fit_residual << ")\n"
    << "verify " << (out.verdict.pass ? "PASS" : "FAIL") << ": " << out.verdict.violations
    << " violations in " << out.verdict.pairs << " pairs, worst pair (" << out.verdict.worst_x
    << ", " << out.verdict.worst_xp << ") ratio " << out.verdict.max_ratio << "\n";
  out.summary = s.str();
  return out;
}

ExportBundle cmd_export(const RunConfig& config) {
  const FuzzyFif fif = build_fif(config);
  ExportBundle bundle = cmd_build(config, fif);
  ExportBundle levels = cmd_levels(config, fif, config.lambdas);
  const HolderOutcome holder = cmd_holder(config, fif);

  bundle.manifest["command"] = "export";
  bundle.manifest["gap_tolerance"] = levels.manifest["gap_tolerance"];
  bundle.manifest["levels"] = levels.manifest["levels"];
  bundle.manifest["holder"] = holder.to_json();
  for (auto& t : levels.tables) bundle.add_table(std::move(t.name), std::move(t.content));
  bundle.add_table("holder_report.json", holder.to_json().dump(2) + "\n");
  return bundle;
}

}  // namespace ffif
