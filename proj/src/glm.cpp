#include "fpclasso/glm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fpclasso/errors.hpp"

namespace fpc {

const char* family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Logistic: return "logistic";
    case Family::Poisson:  return "poisson";
    case Family::CoxPH:    return "cox";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::Gaussian;
  if (name == "logistic") return Family::Logistic;
  if (name == "poisson")  return Family::Poisson;
  if (name == "cox")      return Family::CoxPH;
  throw OutOfRange("unknown family '" + name + "'");
}

void validate_dataset(const Dataset& data, Family family) {
  const Index n = data.n();
  if (n < 2) throw OutOfRange("need at least 2 observations");
  if (data.y.size() != n) throw OutOfRange("y length does not match X rows");
  if (!data.X.allFinite() || !data.y.allFinite())
    throw NumericalOverflow("non-finite values in data");
  switch (family) {
    case Family::Gaussian:
      break;
    case Family::Logistic:
      for (Index i = 0; i < n; ++i)
        if (data.y[i] != 0.0 && data.y[i] != 1.0)
          throw OutOfRange("logistic response must be 0/1");
      break;
    case Family::Poisson:
      for (Index i = 0; i < n; ++i) {
        if (data.y[i] < 0.0 || data.y[i] != std::floor(data.y[i]))
          throw OutOfRange("poisson response must be a nonnegative integer");
      }
      break;
    case Family::CoxPH:
      if (data.event.size() != n)
        throw OutOfRange("cox response needs an event indicator per row");
      for (Index i = 0; i < n; ++i) {
        if (data.y[i] <= 0.0) throw OutOfRange("cox times must be positive");
        if (data.event[i] != 0 && data.event[i] != 1)
          throw OutOfRange("cox event indicators must be 0/1");
      }
      if (data.event.sum() == 0)
        throw DegenerateResponse("cox data has no events");
      break;
  }
}

static Vector expit(const Vector& eta) {
  // Branch on sign so exp() never overflows.
  Vector mu(eta.size());
  for (Index i = 0; i < eta.size(); ++i) {
    const double x = eta[i];
    if (x >= 0.0) {
      mu[i] = 1.0 / (1.0 + std::exp(-x));
    } else {
      const double e = std::exp(x);
      mu[i] = e / (1.0 + e);
    }
  }
  return mu;
}

Vector link_mean(Family family, const Vector& eta) {
  switch (family) {
    case Family::Gaussian: return eta;
    case Family::Logistic: return expit(eta);
    case Family::Poisson:  return eta.array().exp().matrix();
    case Family::CoxPH:
      throw UnsupportedFamily("cox model has no per-observation mean");
  }
  throw UnsupportedFamily("unknown family");
}

namespace {

/// Breslow quantities for CoxPH evaluated at one eta.
///
/// H0[i] = cumulative baseline hazard at t_i, G[i] = sum_{t_k <= t_i} d_k/S_k^2
/// where the sums run over distinct event times, S_k is the risk-set sum of
/// exp(eta) at t_k and d_k the event count there.  Ties share a risk set.
struct CoxBreslow {
  Vector H0;
  Vector G;
  double neg_partial_loglik = 0.0;
};

CoxBreslow cox_breslow(const Dataset& data, const Vector& eta) {
  const Index n = data.n();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return data.y[a] < data.y[b]; });

  Vector ex(n);
  for (Index i = 0; i < n; ++i) ex[i] = std::exp(eta[i]);
  if (!ex.allFinite()) throw NumericalOverflow("exp(eta) overflowed in cox model");

  // Suffix sums of exp(eta) in time order: suffix[k] = sum over sorted
  // positions >= k.  Tied times resolve to the suffix at the first member
  // of their tie group, so every tied observation sees the same risk set.
  std::vector<double> suffix(static_cast<size_t>(n) + 1, 0.0);
  for (Index k = n - 1; k >= 0; --k)
    suffix[static_cast<size_t>(k)] = suffix[static_cast<size_t>(k) + 1] + ex[order[static_cast<size_t>(k)]];

  CoxBreslow out;
  out.H0 = Vector::Zero(n);
  out.G = Vector::Zero(n);
  double h0 = 0.0, g = 0.0, nll = 0.0;
  Index k = 0;
  while (k < n) {
    Index k_end = k;
    const double t = data.y[order[static_cast<size_t>(k)]];
    while (k_end < n && data.y[order[static_cast<size_t>(k_end)]] == t) ++k_end;
    const double S = suffix[static_cast<size_t>(k)];
    int d = 0;
    for (Index j = k; j < k_end; ++j) {
      const Index i = order[static_cast<size_t>(j)];
      if (data.event[i] == 1) {
        ++d;
        nll -= eta[i] - std::log(S);
      }
    }
    if (d > 0) {
      h0 += d / S;
      g += d / (S * S);
    }
    for (Index j = k; j < k_end; ++j) {
      const Index i = order[static_cast<size_t>(j)];
      out.H0[i] = h0;
      out.G[i] = g;
    }
    k = k_end;
  }
  out.neg_partial_loglik = nll;
  return out;
}

}  // namespace

Vector raw_residual(Family family, const Dataset& data, const Vector& eta) {
  switch (family) {
    case Family::Gaussian: return data.y - eta;
    case Family::Logistic: return data.y - expit(eta);
    case Family::Poisson: {
      Vector mu = eta.array().exp().matrix();
      if (!mu.allFinite()) throw NumericalOverflow("exp(eta) overflowed in poisson model");
      return data.y - mu;
    }
    case Family::CoxPH: {
      const CoxBreslow cb = cox_breslow(data, eta);
      Vector eps(data.n());
      for (Index i = 0; i < data.n(); ++i)
        eps[i] = static_cast<double>(data.event[i]) - std::exp(eta[i]) * cb.H0[i];
      return eps;
    }
  }
  throw UnsupportedFamily("unknown family");
}

double neg_log_likelihood(Family family, const Dataset& data, const Vector& eta) {
  const Index n = data.n();
  switch (family) {
    case Family::Gaussian:
      return 0.5 * (data.y - eta).squaredNorm();
    case Family::Logistic: {
      double s = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double x = eta[i];
        // log(1 + e^x) computed stably on both tails
        const double log1pex = (x > 0.0) ? x + std::log1p(std::exp(-x))
                                         : std::log1p(std::exp(x));
        s += log1pex - data.y[i] * x;
      }
      return s;
    }
    case Family::Poisson: {
      double s = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double mu = std::exp(eta[i]);
        if (!std::isfinite(mu)) throw NumericalOverflow("exp(eta) overflowed in poisson model");
        s += mu - data.y[i] * eta[i];
      }
      return s;
    }
    case Family::CoxPH:
      return cox_breslow(data, eta).neg_partial_loglik;
  }
  throw UnsupportedFamily("unknown family");
}

Vector gradient(Family family, const Dataset& data, const Vector& eta) {
  return -(data.X.transpose() * raw_residual(family, data, eta));
}

Vector irls_weights(Family family, const Dataset& data, const Vector& eta) {
  const Index n = data.n();
  switch (family) {
    case Family::Gaussian:
      return Vector::Ones(n);
    case Family::Logistic: {
      Vector mu = expit(eta);
      return (mu.array() * (1.0 - mu.array())).matrix();
    }
    case Family::Poisson: {
      Vector mu = eta.array().exp().matrix();
      if (!mu.allFinite()) throw NumericalOverflow("exp(eta) overflowed in poisson model");
      return mu;
    }
    case Family::CoxPH: {
      const CoxBreslow cb = cox_breslow(data, eta);
      Vector w(n);
      for (Index i = 0; i < n; ++i) {
        const double e = std::exp(eta[i]);
        w[i] = e * cb.H0[i] - e * e * cb.G[i];
      }
      return w;
    }
  }
  throw UnsupportedFamily("unknown family");
}

double null_intercept(Family family, const Dataset& data) {
  switch (family) {
    case Family::Gaussian:
      return data.y.mean();
    case Family::Logistic: {
      const double m = data.y.mean();
      if (m <= 0.0 || m >= 1.0)
        throw DegenerateResponse("logistic response is constant");
      return std::log(m / (1.0 - m));
    }
    case Family::Poisson: {
      const double m = data.y.mean();
      if (m <= 0.0) throw DegenerateResponse("poisson response is all zero");
      return std::log(m);
    }
    case Family::CoxPH:
      return 0.0;
  }
  throw UnsupportedFamily("unknown family");
}

}  // namespace fpc
