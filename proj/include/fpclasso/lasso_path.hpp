#pragma once

#include <optional>

#include "fpclasso/types.hpp"

namespace fpc {

struct PathConfig {
  int n_lambda = 100;      // grid size K when no explicit grid is given
  double min_ratio = 0.01; // grid floor as a fraction of lambda_max
  double tol = 1e-8;       // max absolute coefficient change per sweep
  long max_iter = 100000;  // budget of coordinate sweeps per grid point
  Index max_active = -1;   // stop the path once the active set exceeds this; < 0 means unbounded
};

/// Solution path over a decreasing lambda grid.  Columns that would be
/// saturated or would exceed max_active are dropped, so all vectors share
/// the same (possibly truncated) length.
struct LassoPath {
  Vector lambdas;        // strictly decreasing, positive
  Matrix betas;          // p x K
  Vector intercepts;     // K
  Vector residual_norms; // ||eps_lambda||_2 of the raw residual per point
  Vector lambda_fpc;     // lambdas[k] / residual_norms[k]

  Index n_points() const { return lambdas.size(); }
};

struct KktReport {
  double max_violation_inactive = 0.0; // max(0, max over zero coefs of |X_j' eps| - lambda)
  double max_violation_active = 0.0;   // max over nonzero coefs of ||X_j' eps| - lambda|
  int sign_mismatches = 0;             // active j with sign(X_j' eps) != sign(beta_j)
};

/// max_j |X_j^T eps0| with eps0 the raw residual of the intercept-only model.
/// Any lambda at or above this value admits the all-zero solution.
double lambda_max(const Dataset& data, Family family);

/// sign(z) * max(|z| - lambda, 0).
double soft_threshold(double z, double lambda);

/// Log-spaced grid from lam_max down to min_ratio * lam_max, K points.
Vector default_lambda_grid(double lam_max, int n_lambda, double min_ratio);

/// Penalized path solver: coordinate descent for Gaussian, IRLS around a
/// weighted coordinate-descent core otherwise, with warm starts, sequential
/// screening and a full KKT verification pass at every grid point.
LassoPath fit_path(const Dataset& data, Family family, const PathConfig& config,
                   const std::optional<Vector>& lambdas = std::nullopt);

/// Stationarity report for a given coefficient vector at one lambda.
KktReport kkt_check(const Dataset& data, Family family, const Coefficients& coef,
                    double lambda);

}  // namespace fpc
