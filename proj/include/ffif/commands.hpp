#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffif/analysis.hpp"
#include "ffif/config.hpp"
#include "ffif/error.hpp"
#include "ffif/io.hpp"

namespace ffif {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  std::optional<ErrorCode> error;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool pass = false;

  /// Code of the first failing check, if it failed by raising one.
  std::optional<ErrorCode> first_error() const;
  std::string summary() const;
  nlohmann::json to_json() const;
};

/// Membership validation, IFS construction, matching check and θ-contraction
/// check, in that order; later stages are skipped once one fails.
ValidationReport cmd_validate(const RunConfig& config);

/// Maximum gap between fuzzy-FIF slices and scalar FIFs accepted by cmd_levels.
inline constexpr double kLevelGapTolerance = 1e-6;

/// fif_samples.csv: x, then lower@λ, upper@λ for each configured λ (ascending).
ExportBundle cmd_build(const RunConfig& config);
ExportBundle cmd_build(const RunConfig& config, const FuzzyFif& fif);

/// levels_<λ>.csv per λ: x, fuzzy_lower, fuzzy_upper, scalar_lower, scalar_upper, gap.
ExportBundle cmd_levels(const RunConfig& config, std::vector<double> lambdas);
ExportBundle cmd_levels(const RunConfig& config, const FuzzyFif& fif, std::vector<double> lambdas);

struct HolderOutcome {
  HoelderReport constants;
  EmpiricalHoelder empirical;
  HoelderVerdict verdict;
  std::string summary;
  nlohmann::json to_json() const;
};

HolderOutcome cmd_holder(const RunConfig& config);
HolderOutcome cmd_holder(const RunConfig& config, const FuzzyFif& fif);

/// build + levels (configured λ) + holder in one bundle; the holder report is
/// included as holder_report.json.
ExportBundle cmd_export(const RunConfig& config);

FuzzyFif build_fif(const RunConfig& config);

/// Sorted, deduplicated copy.
std::vector<double> normalized_lambdas(std::vector<double> lambdas);

}  // namespace ffif
