#pragma once

namespace fpc {

/// Standard normal CDF, accurate to full double precision via erfc.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Inverse standard normal CDF for p in (0, 1).
/// Rational approximation polished with one Newton step against norm_cdf;
/// absolute error well below 1e-9 over the open interval.
double norm_quantile(double p);

}  // namespace fpc
