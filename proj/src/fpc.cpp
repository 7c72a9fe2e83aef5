#include "fpclasso/fpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpclasso/errors.hpp"
#include "fpclasso/glm.hpp"
#include "fpclasso/normal.hpp"

namespace fpc {

double fp_to_lambda(double fp, Index p) {
  if (p < 1) throw OutOfRange("fp_to_lambda needs p >= 1");
  const double two_p = 2.0 * static_cast<double>(p);
  if (!(fp > 0.0 && fp < two_p))
    throw OutOfRange("expected_fp must lie strictly between 0 and 2p");
  return norm_quantile(1.0 - fp / two_p);
}

double lambda_to_fp(double lambda, Index p) {
  return 2.0 * static_cast<double>(p) * (1.0 - norm_cdf(lambda));
}

RegularityDiagnostic regularity_check(const LassoPath& path) {
  RegularityDiagnostic diag;
  const Index K = path.n_points();
  diag.lambda_pairs.reserve(static_cast<size_t>(K));
  // Stored grid is descending in lambda; report pairs in ascending order.
  for (Index k = K - 1; k >= 0; --k)
    diag.lambda_pairs.emplace_back(path.lambdas[k], path.lambda_fpc[k]);
  for (size_t i = 1; i < diag.lambda_pairs.size(); ++i) {
    const double drop = diag.lambda_pairs[i - 1].second - diag.lambda_pairs[i].second;
    if (drop > 0.0) {
      ++diag.n_violations;
      diag.max_violation_magnitude = std::max(diag.max_violation_magnitude, drop);
    }
  }
  diag.monotone = diag.n_violations == 0;
  return diag;
}

namespace {

struct Candidate {
  double mismatch_sq = std::numeric_limits<double>::infinity();
  double lambda = 0.0;
  double lambda_fpc = 0.0;
  double residual_norm = 0.0;
  double intercept = 0.0;
  Vector beta;
};

void consider(Candidate& best, const LassoPath& path, Index k, double target) {
  const double d = path.lambda_fpc[k] - target;
  const double sq = d * d;
  // Strict improvement keeps the larger lambda on ties: the grid is scanned
  // in descending lambda order.
  if (sq < best.mismatch_sq ||
      (sq == best.mismatch_sq && path.lambdas[k] > best.lambda)) {
    best.mismatch_sq = sq;
    best.lambda = path.lambdas[k];
    best.lambda_fpc = path.lambda_fpc[k];
    best.residual_norm = path.residual_norms[k];
    best.intercept = path.intercepts[k];
    best.beta = path.betas.col(k);
  }
}

FpcSolution finish(const Candidate& best, Index p, PreprocessRecord record,
                   bool flagged) {
  FpcSolution sol;
  sol.coef.intercept = best.intercept;
  sol.coef.beta = best.beta;
  sol.lambda_classical = best.lambda;
  sol.lambda_fpc = best.lambda_fpc;
  sol.residual_norm = best.residual_norm;
  sol.fp_bound = lambda_to_fp(best.lambda_fpc, p);
  sol.preprocessing = std::move(record);
  sol.target_above_max = flagged;
  for (Index j = 0; j < best.beta.size(); ++j)
    if (best.beta[j] != 0.0) sol.active_set.push_back(j);
  return sol;
}

FpcSolution solve_on_standardized(const Dataset& data, Family family,
                                  const FpcTarget& target, const PathConfig& config,
                                  double tol_match, PreprocessRecord record) {
  if (target.expected_fp.has_value() == target.lambda_fpc.has_value())
    throw OutOfRange("set exactly one of expected_fp and lambda_fpc");
  if (!(tol_match > 0.0)) throw OutOfRange("tol_match must be positive");
  const Index p = data.p();
  const double target_fpc = target.lambda_fpc ? *target.lambda_fpc
                                              : fp_to_lambda(*target.expected_fp, p);
  if (!(target_fpc > 0.0)) {
    // A budget past p maps to a non-positive penalty, which no path point
    // can reach. Hand back the densest fit on the default grid instead.
    LassoPath path = fit_path(data, family, config);
    Candidate best;
    for (Index k = 0; k < path.n_points(); ++k) consider(best, path, k, target_fpc);
    return finish(best, p, std::move(record), false);
  }

  const double lam_max = lambda_max(data, family);
  if (lam_max == 0.0)
    throw DegenerateResponse("intercept-only fit is exact; nothing to select");
  const double b0 = null_intercept(family, data);
  const double eps0_norm =
      raw_residual(family, data, Vector::Constant(data.n(), b0)).norm();
  const double fpc_max = lam_max / eps0_norm;

  if (target_fpc >= fpc_max) {
    Candidate empty;
    empty.mismatch_sq = (fpc_max - target_fpc) * (fpc_max - target_fpc);
    empty.lambda = lam_max;
    empty.lambda_fpc = fpc_max;
    empty.residual_norm = eps0_norm;
    empty.intercept = b0;
    empty.beta = Vector::Zero(p);
    return finish(empty, p, std::move(record), target_fpc > fpc_max);
  }

  const int K = std::max(config.n_lambda, 2);
  double lam_hi = lam_max;
  double lam_lo = config.min_ratio * lam_max;
  Candidate best;
  LassoPath last_path;

  for (int iter = 0; iter < 100; ++iter) {
    const Vector grid = default_lambda_grid(lam_hi, K, lam_lo / lam_hi);
    last_path = fit_path(data, family, config, grid);
    const Index m = last_path.n_points();
    if (m == 0) break;
    for (Index k = 0; k < m; ++k) consider(best, last_path, k, target_fpc);
    if (best.mismatch_sq < tol_match)
      return finish(best, p, std::move(record), false);

    // Re-bracket around the straddle: the smallest grid lambda mapping above
    // the target caps the new grid, its lower neighbour floors it.
    double above = std::numeric_limits<double>::infinity();
    double below = 0.0;
    for (Index k = 0; k < m; ++k) {
      if (last_path.lambda_fpc[k] > target_fpc)
        above = std::min(above, last_path.lambdas[k]);
      else
        below = std::max(below, last_path.lambdas[k]);
    }
    double new_hi, new_lo;
    if (below == 0.0) {
      // Whole grid maps above the target: descend a full decade.
      new_hi = last_path.lambdas[m - 1];
      new_lo = config.min_ratio * new_hi;
    } else if (!std::isfinite(above)) {
      new_hi = lam_hi;
      new_lo = 0.5 * (lam_hi + below);
    } else {
      new_hi = std::max(above, below);
      new_lo = std::min(above, below);
    }
    if (new_hi - new_lo < 1e-12 * lam_max) break;
    lam_hi = new_hi;
    lam_lo = new_lo;
  }

  if (best.mismatch_sq < tol_match) return finish(best, p, std::move(record), false);
  const RegularityDiagnostic diag = regularity_check(last_path);
  if (!diag.monotone)
    throw RegularityViolation("normalized penalty not monotone along the path",
                              diag.n_violations, diag.max_violation_magnitude);
  throw NonConvergence("target penalty not matched within the iteration budget",
                       target_fpc, 100);
}

}  // namespace

FpcSolution solve_fpc(const Dataset& data, Family family, const FpcTarget& target,
                      const PathConfig& config, double tol_match) {
  validate_dataset(data, family);
  PreprocessRecord record;
  Dataset prepped;
  prepped.X = preprocess_design(data.X, record);
  prepped.y = data.y;
  prepped.event = data.event;
  if (prepped.X.cols() == 0) throw DegenerateColumn("all design columns are constant");
  return solve_on_standardized(prepped, family, target, config, tol_match,
                               std::move(record));
}

FpcSolution solve_fpc_standardized(const Dataset& data, Family family,
                                   const FpcTarget& target, const PathConfig& config,
                                   double tol_match) {
  validate_dataset(data, family);
  return solve_on_standardized(data, family, target, config, tol_match,
                               PreprocessRecord::identity(data.p()));
}

}  // namespace fpc
