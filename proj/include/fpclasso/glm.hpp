#pragma once

#include "fpclasso/types.hpp"

namespace fpc {

/// Inverse link: eta -> E[y | eta].
///
/// Gaussian: identity.  Logistic: expit.  Poisson: exp.  CoxPH has no
/// per-observation mean in this sense and is rejected.
Vector link_mean(Family family, const Vector& eta);

/// Raw (working-response) residual eps with the property that the gradient
/// of the negative log-likelihood wrt beta equals -X^T eps for every family.
///
/// Gaussian: y - eta.  Logistic: y - expit(eta).  Poisson: y - exp(eta).
/// CoxPH (Breslow ties): the martingale residual delta_i - exp(eta_i) H0(t_i)
/// with H0 the Breslow cumulative baseline hazard.
Vector raw_residual(Family family, const Dataset& data, const Vector& eta);

/// Sum-form negative log-likelihood (no 1/n factor, constants in y dropped
/// where conventional).
///
/// Gaussian: 0.5 * sum (y - eta)^2.
/// Logistic: sum [log(1 + exp(eta)) - y eta].
/// Poisson:  sum [exp(eta) - y eta]  (log y! omitted).
/// CoxPH:    Breslow partial likelihood,
///           -sum_{i: delta_i = 1} [eta_i - log sum_{t_k >= t_i} exp(eta_k)].
double neg_log_likelihood(Family family, const Dataset& data, const Vector& eta);

/// Gradient of neg_log_likelihood wrt beta at eta = X beta + intercept;
/// identically -X^T raw_residual(family, data, eta).
Vector gradient(Family family, const Dataset& data, const Vector& eta);

/// Diagonal IRLS weights (second derivative of the per-observation loss in
/// eta).  Gaussian: 1.  Logistic: mu(1-mu).  Poisson: exp(eta).
/// CoxPH: exp(eta_i) H0(t_i) - exp(2 eta_i) G(t_i) with
/// G(t) = sum_{t_k <= t} d_k / S_k^2 (diagonal of the Breslow Hessian).
Vector irls_weights(Family family, const Dataset& data, const Vector& eta);

/// Intercept of the null (covariate-free) model.
///
/// Gaussian: mean(y).  Logistic: logit(mean(y)).  Poisson: log(mean(y)).
/// CoxPH: 0 (the partial likelihood has no intercept).
/// Throws DegenerateResponse when the implied mean is on the boundary
/// (logistic with all-0/all-1 y, poisson with mean 0).
double null_intercept(Family family, const Dataset& data);

}  // namespace fpc
