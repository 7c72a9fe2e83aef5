#pragma once

#include <cstdint>
#include <string>

#include "fpclasso/types.hpp"

namespace fpc {

// Weight/noise distributions for the randomly weighted self-normalized sum
//   psi = B . A / ||A||_2.
enum class RwKind {
  Gaussian,            // N(0,1)
  Bernoulli,           // {0,1} with P(1) = q, standardized to mean 0 sd 1
  Exponential,         // rate r, standardized to mean 0 sd 1
  ExponentialLogSkew,  // log(X + c) with the skew-minimizing shift, standardized
};

struct RwDistSpec {
  RwKind kind = RwKind::Gaussian;
  double param = 0.0;  // Bernoulli: q; Exponential kinds: rate. Unused for Gaussian.

  double q() const { return param; }
  double rate() const { return param; }
};

RwDistSpec rw_gaussian();
RwDistSpec rw_bernoulli(double q = 0.5);
RwDistSpec rw_exponential(double rate = 1.0);
RwDistSpec rw_exp_logskew(double rate = 1.0);

// Names: gaussian, bernoulli, exponential, exp-logskew. Throws OutOfRange on
// anything else.
RwDistSpec parse_rw_dist(const std::string& name);
std::string rw_dist_name(const RwDistSpec& dist);

// How draws are centered and scaled before entering psi.
//   Theoretical: subtract the distribution mean, divide by the distribution
//     sd (exact constants). Keeps replicates i.i.d. from a fixed law, which
//     is what the distance bounds describe.
//   Empirical: standardize each drawn vector by its own sample moments, the
//     way a data pipeline would. For ExponentialLogSkew this re-fits the
//     shift on the drawn vector.
enum class Standardize { Theoretical, Empirical };

struct RwsnsSampleSet {
  Vector values;  // m replicates of psi
  Index n = 0;    // length of B and A in each replicate
  RwDistSpec b_dist;
  RwDistSpec a_dist;
  std::uint64_t seed = 0;
};

// Distances to N(0,1) and the moment-based bounds that should dominate them.
// empirical_distance fills d_K/d_W; lemma3_bounds fills xi3/delta/bound_*.
struct DistanceReport {
  double d_K = 0.0;      // sup-distance between the empirical CDF and Phi
  double d_W = 0.0;      // mean absolute quantile gap
  double xi3 = 0.0;      // E|B|^3 for the weight distribution
  double delta = 0.0;    // E sum_i |A_i / ||A||_2|^3
  double bound_K = 0.0;  // 0.56 * xi3 * delta
  double bound_W = 0.0;  // xi3 * delta
};

// B^T A / ||A||_2. Throws DegenerateDenominator when ||A|| = 0 and OutOfRange
// on a length mismatch.
double rwsns_statistic(const Vector& B, const Vector& A);

// m independent replicates of psi with n-vectors B, A drawn fresh each time.
// Replicate r uses child_seed(seed, r), so the output is identical for any
// thread count.
RwsnsSampleSet sample_rwsns(const RwDistSpec& b_dist, const RwDistSpec& a_dist,
                            Index n, Index m, std::uint64_t seed,
                            Standardize mode = Standardize::Theoretical,
                            int threads = 1);

// Kolmogorov and Wasserstein-style distances of the sample to N(0,1).
// Needs at least 10 replicates.
DistanceReport empirical_distance(const RwsnsSampleSet& samples);

// E|B|^3 under theoretical standardization, in closed form.
double xi3_analytic(const RwDistSpec& b_dist);

// xi3 plus a Monte Carlo estimate of delta over mc_reps draws of A, and the
// resulting distance bounds.
DistanceReport lemma3_bounds(const RwDistSpec& b_dist, const RwDistSpec& a_dist,
                             Index n, Index mc_reps, std::uint64_t seed,
                             int threads = 1);

}  // namespace fpc
