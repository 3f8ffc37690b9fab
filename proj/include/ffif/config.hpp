#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ffif/fif.hpp"
#include "ffif/ifs.hpp"
#include "ffif/membership.hpp"

namespace ffif {

/// Tabulated q_k samples as they appear in a config file.
struct QTableSpec {
  std::vector<double> xs;
  std::vector<MembershipSpec> values;
  bool operator==(const QTableSpec&) const = default;
};

/// "example" selects LinearBlendQ; "tabulated" uses q_tables.
struct QRecipe {
  std::string kind = "example";
  std::vector<QTableSpec> tables;
  bool operator==(const QRecipe&) const = default;
};

struct RunConfig {
  std::vector<double> knots;
  std::vector<MembershipSpec> values;
  std::vector<double> scales;
  std::size_t levels = 100;
  std::size_t grid = 1024;
  double tol = 1e-8;
  std::size_t max_depth = 2000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  QRecipe q;
  std::vector<double> lambdas{0.0, 0.5, 1.0};
  /// Build even when the matching condition fails.
  bool allow_unmatched = false;
  double tau_boundary = 0.9;
  std::size_t holder_pairs = 10000;
  std::size_t contraction_trials = 1000;
  unsigned workers = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigParse on malformed JSON or wrong field types and
/// SchemaViolation when the invariants of RunConfig do not hold.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

/// Counts consistent (n+1 specs, n scales, n ≥ 2), tol > 0, M ≥ 2, N ≥ 2n,
/// lambdas in [0,1]. Throws SchemaViolation.
void validate_config(const RunConfig& config);

GridPtr make_level_grid(const RunConfig& config);
std::shared_ptr<const IfsSystem> make_system(const RunConfig& config);
RbOptions make_rb_options(const RunConfig& config);

}  // namespace ffif
