#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpclasso/fpc.hpp"
#include "fpclasso/simlab.hpp"
#include "fpclasso/types.hpp"

namespace fpc {

// One selected feature. coef is on the standardized design; coef_original
// applies to the column after its audit transform (log shift when present)
// but before centering and scaling, so raw-data predictions read
//   eta = intercept_original + sum_j coef_original_j * t_j(x_j),
// with t_j(x) = log(x + shift_j) when shift_j is set and x otherwise.
struct ActiveFeature {
  std::string name;
  Index index = 0;  // position among the model's feature columns
  double coef = 0.0;
  double coef_original = 0.0;

  bool operator==(const ActiveFeature&) const = default;
};

// Per-column preprocessing audit entry, named after the input column.
struct ColumnAudit {
  std::string name;
  std::optional<double> shift;
  double mean = 0.0;
  double scale = 1.0;
  double skew_before = 0.0;
  double skew_after = 0.0;
  bool transform_applied = false;
  bool dropped = false;

  bool operator==(const ColumnAudit&) const = default;
};

struct FitReport {
  std::string tool;     // "fpclasso"
  std::string version;  // tool version, always written
  std::string family;
  std::uint64_t seed = 0;

  double lambda_fpc = 0.0;
  double lambda_classical = 0.0;
  double fp_bound = 0.0;
  double post_hoc_fdr = 0.0;
  bool target_above_max = false;

  double intercept = 0.0;           // standardized design
  double intercept_original = 0.0;  // raw-data prediction intercept
  std::vector<ActiveFeature> active;

  bool regularity_monotone = true;
  int regularity_violations = 0;
  double regularity_max_violation = 0.0;

  std::vector<ColumnAudit> preprocessing;

  // Elapsed wall time; only embedded on request since it breaks the
  // byte-identical-output guarantee. The CLI always logs it to stderr.
  std::optional<double> timing_seconds;

  bool operator==(const FitReport&) const = default;
};

// Maps standardized coefficients back to the transformed-but-unscaled
// columns: coef_original_j = coef_j / scale_j and the intercept absorbs the
// centering terms. Dropped columns cannot be active.
std::pair<double, std::vector<double>> originalize_coefficients(
    const Coefficients& coef, const PreprocessRecord& record);

FitReport build_fit_report(const FpcSolution& solution,
                           const RegularityDiagnostic& diagnostic, Family family,
                           const std::vector<std::string>& feature_names,
                           std::uint64_t seed);

std::string serialize_fit_report(const FitReport& report);
FitReport parse_fit_report(const std::string& text);

// Simulation outputs: a JSON aggregate document, a flat per-cell CSV, and a
// long-format table keyed the way the summary figures are drawn.
std::string serialize_sim_result(const SimResult& result);
std::string sim_cells_csv(const SimResult& result);
std::string sim_plot_csv(const SimResult& result);

}  // namespace fpc
