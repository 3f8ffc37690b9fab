#include "ffif/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ffif/error.hpp"

namespace ffif {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::SchemaViolation, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

MembershipSpec spec_from_json(const json& j) {
  const auto kind = require(j, "kind").get<std::string>();
  if (kind == "triangular") {
    return Triangular{require(j, "a").get<double>(), require(j, "b").get<double>(),
                      require(j, "c").get<double>()};
  }
  if (kind == "trapezoidal") {
    return Trapezoidal{require(j, "a").get<double>(), require(j, "b").get<double>(),
                       require(j, "c").get<double>(), require(j, "d").get<double>()};
  }
  if (kind == "truncated_gaussian") {
    const auto support = require(j, "support").get<std::vector<double>>();
    if (support.size() != 2) throw Error(ErrorCode::SchemaViolation, "support needs two bounds");
    return TruncatedGaussian{require(j, "center").get<double>(), require(j, "width").get<double>(),
                             support[0], support[1]};
  }
  if (kind == "quadratic_flank") {
    const auto shape = require(j, "shape").get<std::string>();
    if (shape != "convex" && shape != "concave") {
      throw Error(ErrorCode::SchemaViolation, "quadratic_flank shape must be convex or concave");
    }
    return QuadraticFlank{require(j, "a").get<double>(), require(j, "peak").get<double>(),
                          require(j, "b").get<double>(),
                          shape == "convex" ? FlankShape::Convex : FlankShape::Concave};
  }
  if (kind == "level_table") {
    return LevelTable{require(j, "levels").get<std::vector<double>>(),
                      require(j, "lower").get<std::vector<double>>(),
                      require(j, "upper").get<std::vector<double>>()};
  }
  if (kind == "piecewise_analytic") {
    PiecewiseAnalytic p;
    for (const auto& piece : require(j, "pieces")) {
      p.pieces.push_back({require(piece, "from").get<double>(), require(piece, "to").get<double>(),
                          require(piece, "coeffs").get<std::vector<double>>()});
    }
    return p;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown membership kind '" + kind + "'");
}

json spec_to_json(const MembershipSpec& spec) {
  struct Visitor {
    json operator()(const Triangular& t) const {
      return {{"kind", "triangular"}, {"a", t.a}, {"b", t.b}, {"c", t.c}};
    }
    json operator()(const Trapezoidal& t) const {
      return {{"kind", "trapezoidal"}, {"a", t.a}, {"b", t.b}, {"c", t.c}, {"d", t.d}};
    }
    json operator()(const TruncatedGaussian& g) const {
      return {{"kind", "truncated_gaussian"},
              {"center", g.center},
              {"width", g.width},
              {"support", {g.support_lo, g.support_hi}}};
    }
    json operator()(const QuadraticFlank& q) const {
      return {{"kind", "quadratic_flank"},
              {"a", q.a},
              {"peak", q.peak},
              {"b", q.b},
              {"shape", q.shape == FlankShape::Convex ? "convex" : "concave"}};
    }
    json operator()(const LevelTable& t) const {
      return {{"kind", "level_table"}, {"levels", t.levels}, {"lower", t.lower}, {"upper", t.upper}};
    }
    json operator()(const PiecewiseAnalytic& p) const {
      json pieces = json::array();
      for (const auto& piece : p.pieces) {
        pieces.push_back({{"from", piece.from}, {"to", piece.to}, {"coeffs", piece.coeffs}});
      }
      return {{"kind", "piecewise_analytic"}, {"pieces", pieces}};
    }
  };
  return std::visit(Visitor{}, spec);
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, "config must be a JSON object");
  RunConfig c;
  c.knots = require(j, "knots").get<std::vector<double>>();
  for (const auto& v : require(j, "values")) c.values.push_back(spec_from_json(v));
  c.scales = require(j, "scales").get<std::vector<double>>();
  c.levels = optional_field(j, "levels", c.levels);
  c.grid = optional_field(j, "grid", c.grid);
  c.tol = optional_field(j, "tol", c.tol);
  c.max_depth = optional_field(j, "max_depth", c.max_depth);
  c.seed = optional_field(j, "seed", c.seed);
  c.output_dir = optional_field(j, "output_dir", c.output_dir);
  c.lambdas = optional_field(j, "lambdas", c.lambdas);
  c.allow_unmatched = optional_field(j, "allow_unmatched", c.allow_unmatched);
  c.tau_boundary = optional_field(j, "tau_boundary", c.tau_boundary);
  c.holder_pairs = optional_field(j, "holder_pairs", c.holder_pairs);
  c.contraction_trials = optional_field(j, "contraction_trials", c.contraction_trials);
  c.workers = optional_field(j, "workers", c.workers);
  if (j.contains("q")) {
    const json& q = j.at("q");
    c.q.kind = require(q, "kind").get<std::string>();
    if (c.q.kind == "tabulated") {
      for (const auto& t : require(q, "tables")) {
        QTableSpec table;
        table.xs = require(t, "xs").get<std::vector<double>>();
        for (const auto& v : require(t, "values")) table.values.push_back(spec_from_json(v));
        c.q.tables.push_back(std::move(table));
      }
    } else if (c.q.kind != "example") {
      throw Error(ErrorCode::SchemaViolation, "unknown q recipe '" + c.q.kind + "'");
    }
  }
  return c;
}

}  // namespace

void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::SchemaViolation, msg); };
  if (c.knots.size() < 3) fail("need at least three knots");
  const std::size_t n = c.knots.size() - 1;
  if (c.values.size() != n + 1) {
    fail(std::to_string(c.knots.size()) + " knots need " + std::to_string(n + 1) + " value specs, got " +
         std::to_string(c.values.size()));
  }
  if (c.scales.size() != n) {
    fail(std::to_string(c.knots.size()) + " knots need " + std::to_string(n) + " scales, got " +
         std::to_string(c.scales.size()));
  }
  if (!(c.tol > 0.0)) fail("tol must be positive");
  if (c.levels < 2) fail("levels (M) must be at least 2");
  if (c.grid < 2 * n) fail("grid (N) must be at least 2n = " + std::to_string(2 * n));
  if (c.max_depth < 1) fail("max_depth must be at least 1");
  for (const double l : c.lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) fail("lambdas must lie in [0,1]");
  }
  if (c.q.kind == "tabulated" && c.q.tables.size() != n) {
    fail("tabulated q needs one table per interval");
  }
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, e.what());
  }
  RunConfig c;
  try {
    c = config_from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, e.what());
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  json values = json::array();
  for (const auto& v : c.values) values.push_back(spec_to_json(v));
  json q = {{"kind", c.q.kind}};
  if (c.q.kind == "tabulated") {
    json tables = json::array();
    for (const auto& t : c.q.tables) {
      json tv = json::array();
      for (const auto& v : t.values) tv.push_back(spec_to_json(v));
      tables.push_back({{"xs", t.xs}, {"values", tv}});
    }
    q["tables"] = tables;
  }
  const json j = {{"knots", c.knots},
                  {"values", values},
                  {"scales", c.scales},
                  {"levels", c.levels},
                  {"grid", c.grid},
                  {"tol", c.tol},
                  {"max_depth", c.max_depth},
                  {"seed", c.seed},
                  {"output_dir", c.output_dir},
                  {"q", q},
                  {"lambdas", c.lambdas},
                  {"allow_unmatched", c.allow_unmatched},
                  {"tau_boundary", c.tau_boundary},
                  {"holder_pairs", c.holder_pairs},
                  {"contraction_trials", c.contraction_trials},
                  {"workers", c.workers}};
  return j.dump(2);
}

GridPtr make_level_grid(const RunConfig& c) { return LevelGrid::uniform(c.levels); }

std::shared_ptr<const IfsSystem> make_system(const RunConfig& c) {
  const GridPtr grid = make_level_grid(c);
  std::vector<FuzzyNumber> values;
  for (const auto& spec : c.values) values.push_back(from_membership(spec, grid));
  std::shared_ptr<const QFunction> q = std::make_shared<LinearBlendQ>();
  if (c.q.kind == "tabulated") {
    std::vector<TabulatedQ::Table> tables;
    for (const auto& t : c.q.tables) {
      TabulatedQ::Table table{t.xs, {}};
      for (const auto& v : t.values) table.values.push_back(from_membership(v, grid));
      tables.push_back(std::move(table));
    }
    q = std::make_shared<TabulatedQ>(std::move(tables));
  }
  return std::make_shared<IfsSystem>(FuzzyDataSet(c.knots, std::move(values)), c.scales, q);
}

RbOptions make_rb_options(const RunConfig& c) {
  RbOptions o;
  o.tol = c.tol;
  o.max_depth = c.max_depth;
  o.grid_steps = c.grid;
  o.require_matching = !c.allow_unmatched;
  o.workers = c.workers;
  return o;
}

}  // namespace ffif
