#pragma once

#include <optional>
#include <vector>

#include "fpclasso/types.hpp"

namespace fpc {

/// Per-column preprocessing trace: the log-shift (when applied), the
/// standardization constants and the skew before/after.
struct ColumnRecord {
  std::optional<double> shift;  // c* of log(x + c*), set iff transform_applied
  double mean = 0.0;
  double scale = 1.0;
  double skew_before = 0.0;
  double skew_after = 0.0;
  bool transform_applied = false;
  bool dropped = false;  // constant column, removed from the design
};

struct PreprocessRecord {
  std::vector<ColumnRecord> columns;  // one per original column
  std::vector<Index> kept;            // original indices of retained columns

  /// Identity record for a design that is already standardized.
  static PreprocessRecord identity(Index p);
};

/// Population third standardized moment (central moments with divisor n).
double skewness(const Vector& column);

/// Searches c minimizing the squared skewness of log(x + c) over
/// c in (-min(x), -min(x) + 1e6 * range(x)) by a coarse log-spaced scan
/// followed by golden-section refinement.  Returns the transformed column
/// and c* when the optimum strictly beats the raw squared skewness;
/// otherwise the column is returned unchanged with no shift.  Columns with
/// fewer than 3 distinct values are returned unchanged.
std::pair<Vector, std::optional<double>> skew_adjust(const Vector& column);

/// Shifts and scales to exact sample mean 0 and population (divide-by-n)
/// standard deviation 1.  Returns (column, mean, scale).
std::tuple<Vector, double, double> standardize(const Vector& column);

/// Full design pipeline: skew_adjust then standardize per column; constant
/// columns are dropped and flagged in the record.
Matrix preprocess_design(const Matrix& X, PreprocessRecord& record);

/// Principal component scores of a column-centered matrix, ordered by
/// decreasing variance, with the loadings to map components back to
/// original features.  rank < min(n,p) marks rank deficiency.
struct PcaResult {
  Matrix scores;    // n x rank
  Matrix loadings;  // p x rank
  Index rank = 0;
  bool rank_deficient = false;
};

PcaResult orthogonalize_pca(const Matrix& X);

}  // namespace fpc
