#include "fpclasso/rwsns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fpclasso/errors.hpp"
#include "fpclasso/normal.hpp"
#include "fpclasso/parallel.hpp"
#include "fpclasso/preprocess.hpp"
#include "fpclasso/rng.hpp"

namespace fpc {

namespace {

// Constants of the skew-minimized log transform of Exp(1): for Y = log(E + c)
// with E ~ Exp(1), c below drives the third central moment of Y to zero, and
// kLogMean/kLogSd are E[Y] and sd(Y) at that shift. kLogXi3 is E|Y'|^3 of the
// standardized Y. For rate r the transform shifts by c/r and the log rate
// offset cancels under standardization, so the standardized law is rate-free.
constexpr double kLogShift = 0.15542698083442510;
constexpr double kLogMean = -0.18649655455482284;
constexpr double kLogSd = 0.82848522588681840;
constexpr double kLogXi3 = 1.4317661614998483;

void validate_dist(const RwDistSpec& d) {
  switch (d.kind) {
    case RwKind::Gaussian:
      return;
    case RwKind::Bernoulli:
      if (!(d.q() > 0.0 && d.q() < 1.0))
        throw OutOfRange("rwsns: Bernoulli q must lie in (0, 1)");
      return;
    case RwKind::Exponential:
    case RwKind::ExponentialLogSkew:
      if (!(d.rate() > 0.0))
        throw OutOfRange("rwsns: exponential rate must be positive");
      return;
  }
  throw OutOfRange("rwsns: unknown distribution kind");
}

// Draw with the distribution's own mean and sd removed.
Vector draw_theoretical(const RwDistSpec& d, Index n, Rng& rng) {
  Vector v(n);
  switch (d.kind) {
    case RwKind::Gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      for (Index i = 0; i < n; ++i) v[i] = g(rng);
      return v;
    }
    case RwKind::Bernoulli: {
      const double q = d.q();
      const double s = std::sqrt(q * (1.0 - q));
      std::bernoulli_distribution b(q);
      for (Index i = 0; i < n; ++i) v[i] = (b(rng) ? 1.0 - q : -q) / s;
      return v;
    }
    case RwKind::Exponential: {
      // rate * Exp(rate) == Exp(1), so the standardized draw is rate-free.
      std::exponential_distribution<double> e(1.0);
      for (Index i = 0; i < n; ++i) v[i] = e(rng) - 1.0;
      return v;
    }
    case RwKind::ExponentialLogSkew: {
      std::exponential_distribution<double> e(1.0);
      for (Index i = 0; i < n; ++i)
        v[i] = (std::log(e(rng) + kLogShift) - kLogMean) / kLogSd;
      return v;
    }
  }
  throw OutOfRange("rwsns: unknown distribution kind");
}

// Raw draw on the distribution's native scale, for the empirical pipeline.
Vector draw_raw(const RwDistSpec& d, Index n, Rng& rng) {
  Vector v(n);
  switch (d.kind) {
    case RwKind::Gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      for (Index i = 0; i < n; ++i) v[i] = g(rng);
      return v;
    }
    case RwKind::Bernoulli: {
      std::bernoulli_distribution b(d.q());
      for (Index i = 0; i < n; ++i) v[i] = b(rng) ? 1.0 : 0.0;
      return v;
    }
    case RwKind::Exponential:
    case RwKind::ExponentialLogSkew: {
      std::exponential_distribution<double> e(d.rate());
      for (Index i = 0; i < n; ++i) v[i] = e(rng);
      return v;
    }
  }
  throw OutOfRange("rwsns: unknown distribution kind");
}

Vector draw_vector(const RwDistSpec& d, Index n, Rng& rng, Standardize mode) {
  if (mode == Standardize::Theoretical) return draw_theoretical(d, n, rng);
  Vector raw = draw_raw(d, n, rng);
  if (d.kind == RwKind::ExponentialLogSkew) raw = skew_adjust(raw).first;
  return std::get<0>(standardize(raw));
}

}  // namespace

RwDistSpec rw_gaussian() { return {RwKind::Gaussian, 0.0}; }

RwDistSpec rw_bernoulli(double q) {
  RwDistSpec d{RwKind::Bernoulli, q};
  validate_dist(d);
  return d;
}

RwDistSpec rw_exponential(double rate) {
  RwDistSpec d{RwKind::Exponential, rate};
  validate_dist(d);
  return d;
}

RwDistSpec rw_exp_logskew(double rate) {
  RwDistSpec d{RwKind::ExponentialLogSkew, rate};
  validate_dist(d);
  return d;
}

RwDistSpec parse_rw_dist(const std::string& name) {
  if (name == "gaussian") return rw_gaussian();
  if (name == "bernoulli") return rw_bernoulli();
  if (name == "exponential") return rw_exponential();
  if (name == "exp-logskew") return rw_exp_logskew();
  throw OutOfRange("unknown distribution '" + name +
                   "'; expected gaussian, bernoulli, exponential, or exp-logskew");
}

std::string rw_dist_name(const RwDistSpec& dist) {
  switch (dist.kind) {
    case RwKind::Gaussian:
      return "gaussian";
    case RwKind::Bernoulli:
      return "bernoulli";
    case RwKind::Exponential:
      return "exponential";
    case RwKind::ExponentialLogSkew:
      return "exp-logskew";
  }
  throw OutOfRange("rwsns: unknown distribution kind");
}

double rwsns_statistic(const Vector& B, const Vector& A) {
  if (B.size() != A.size())
    throw OutOfRange("rwsns_statistic: B and A must have equal length");
  const double norm = A.norm();
  if (!(norm > 0.0))
    throw DegenerateDenominator("rwsns_statistic: A has zero norm");
  return B.dot(A) / norm;
}

RwsnsSampleSet sample_rwsns(const RwDistSpec& b_dist, const RwDistSpec& a_dist,
                            Index n, Index m, std::uint64_t seed,
                            Standardize mode, int threads) {
  if (n < 1) throw OutOfRange("sample_rwsns: n must be at least 1");
  if (m < 1) throw OutOfRange("sample_rwsns: m must be at least 1");
  validate_dist(b_dist);
  validate_dist(a_dist);

  RwsnsSampleSet out;
  out.values.resize(m);
  out.n = n;
  out.b_dist = b_dist;
  out.a_dist = a_dist;
  out.seed = seed;

  parallel_for_indexed(m, threads, [&](std::int64_t r) {
    Rng rng = make_rng(child_seed(seed, static_cast<std::uint64_t>(r)));
    const Vector B = draw_vector(b_dist, n, rng, mode);
    const Vector A = draw_vector(a_dist, n, rng, mode);
    out.values[r] = rwsns_statistic(B, A);
  });

  if (!out.values.allFinite())
    throw NumericalOverflow("sample_rwsns: non-finite statistic produced");
  return out;
}

DistanceReport empirical_distance(const RwsnsSampleSet& samples) {
  const Index m = samples.values.size();
  if (m < 10) throw OutOfRange("empirical_distance: need at least 10 replicates");

  std::vector<double> x(samples.values.data(), samples.values.data() + m);
  std::sort(x.begin(), x.end());

  DistanceReport rep;
  const double dm = static_cast<double>(m);
  double dk = 0.0;
  double dw = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double f = norm_cdf(x[static_cast<std::size_t>(i)]);
    const double hi = std::abs(static_cast<double>(i + 1) / dm - f);
    const double lo = std::abs(static_cast<double>(i) / dm - f);
    dk = std::max(dk, std::max(hi, lo));
    dw += std::abs(x[static_cast<std::size_t>(i)] -
                   norm_quantile((static_cast<double>(i) + 0.5) / dm));
  }
  rep.d_K = dk;
  rep.d_W = dw / dm;
  return rep;
}

double xi3_analytic(const RwDistSpec& b_dist) {
  validate_dist(b_dist);
  switch (b_dist.kind) {
    case RwKind::Gaussian:
      return 2.0 * std::sqrt(2.0 / std::numbers::pi);
    case RwKind::Bernoulli: {
      // Two-point law at (1-q)/s and -q/s with s = sqrt(q(1-q)).
      const double q = b_dist.q();
      const double s = std::sqrt(q * (1.0 - q));
      return (q * std::pow(1.0 - q, 3) + (1.0 - q) * std::pow(q, 3)) / (s * s * s);
    }
    case RwKind::Exponential:
      // E|X - 1|^3 for X ~ Exp(1) = 12/e - 2.
      return 12.0 / std::numbers::e - 2.0;
    case RwKind::ExponentialLogSkew:
      return kLogXi3;
  }
  throw OutOfRange("rwsns: unknown distribution kind");
}

DistanceReport lemma3_bounds(const RwDistSpec& b_dist, const RwDistSpec& a_dist,
                             Index n, Index mc_reps, std::uint64_t seed,
                             int threads) {
  if (n < 1) throw OutOfRange("lemma3_bounds: n must be at least 1");
  if (mc_reps < 1) throw OutOfRange("lemma3_bounds: mc_reps must be at least 1");
  validate_dist(a_dist);

  DistanceReport rep;
  rep.xi3 = xi3_analytic(b_dist);

  Vector per_rep(mc_reps);
  parallel_for_indexed(mc_reps, threads, [&](std::int64_t r) {
    Rng rng = make_rng(child_seed(seed, static_cast<std::uint64_t>(r)));
    Vector a = draw_theoretical(a_dist, n, rng);
    const double norm = a.norm();
    if (!(norm > 0.0))
      throw DegenerateDenominator("lemma3_bounds: A draw has zero norm");
    per_rep[r] = (a / norm).array().abs().cube().sum();
  });
  rep.delta = per_rep.sum() / static_cast<double>(mc_reps);

  rep.bound_K = 0.56 * rep.xi3 * rep.delta;
  rep.bound_W = rep.xi3 * rep.delta;
  return rep;
}

}  // namespace fpc
