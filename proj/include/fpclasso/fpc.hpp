#pragma once

#include <optional>
#include <vector>

#include "fpclasso/lasso_path.hpp"
#include "fpclasso/preprocess.hpp"
#include "fpclasso/types.hpp"

namespace fpc {

/// Either a budget of expected false positives or the penalty level itself;
/// exactly one must be set.
struct FpcTarget {
  std::optional<double> expected_fp;
  std::optional<double> lambda_fpc;

  static FpcTarget fp(double v) { return {v, std::nullopt}; }
  static FpcTarget lambda(double v) { return {std::nullopt, v}; }
};

struct FpcSolution {
  Coefficients coef;           // in the preprocessed (standardized) design
  double lambda_fpc = 0.0;     // achieved penalty on the normalized scale
  double lambda_classical = 0.0;
  double residual_norm = 0.0;  // ||eps||_2 at the solution
  std::vector<Index> active_set;
  double fp_bound = 0.0;       // lambda_to_fp(lambda_fpc, p)
  PreprocessRecord preprocessing;
  bool target_above_max = false;  // target exceeded the empty-model level
};

struct RegularityDiagnostic {
  // (lambda, lambda_fpc) pairs in ascending lambda order.
  std::vector<std::pair<double, double>> lambda_pairs;
  int n_violations = 0;
  double max_violation_magnitude = 0.0;
  bool monotone = true;
};

/// Normal quantile at 1 - fp/(2p): the penalty level whose expected number
/// of null-design false positives is fp.  Requires 0 < fp < 2p.
double fp_to_lambda(double fp, Index p);

/// 2p(1 - Phi(lambda)): the expected false positive count bound at a given
/// normalized penalty level.
double lambda_to_fp(double lambda, Index p);

/// Counts adjacent grid pairs where the normalized penalty decreases as
/// lambda increases, which breaks the bracketed search's assumption.
RegularityDiagnostic regularity_check(const LassoPath& path);

/// Applies skew_adjust + standardize to the design, then searches the
/// classical path for the point whose lambda/||eps||_2 matches the target,
/// re-bracketing around the straddling grid points until the squared
/// mismatch falls below tol_match or the bracket collapses.
FpcSolution solve_fpc(const Dataset& data, Family family, const FpcTarget& target,
                      const PathConfig& config, double tol_match = 1e-8);

/// Same search on a design that is already standardized; no preprocessing
/// is applied and the returned record is the identity.
FpcSolution solve_fpc_standardized(const Dataset& data, Family family,
                                   const FpcTarget& target, const PathConfig& config,
                                   double tol_match = 1e-8);

}  // namespace fpc
