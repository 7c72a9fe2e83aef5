#include "fpclasso/lasso_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fpclasso/errors.hpp"
#include "fpclasso/glm.hpp"

namespace fpc {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

double lambda_max(const Dataset& data, Family family) {
  validate_dataset(data, family);
  const double b0 = null_intercept(family, data);
  const Vector eta = Vector::Constant(data.n(), b0);
  const Vector eps0 = raw_residual(family, data, eta);
  return (data.X.transpose() * eps0).cwiseAbs().maxCoeff();
}

Vector default_lambda_grid(double lam_max, int n_lambda, double min_ratio) {
  if (n_lambda < 2) throw OutOfRange("lambda grid needs at least 2 points");
  if (!(min_ratio > 0.0 && min_ratio < 1.0))
    throw OutOfRange("min_ratio must lie in (0,1)");
  if (!(lam_max > 0.0)) throw OutOfRange("lambda_max must be positive");
  Vector grid(n_lambda);
  const double log_ratio = std::log(min_ratio);
  for (int k = 0; k < n_lambda; ++k)
    grid[k] = lam_max * std::exp(log_ratio * k / (n_lambda - 1));
  grid[0] = lam_max;
  grid[n_lambda - 1] = lam_max * min_ratio;
  return grid;
}

KktReport kkt_check(const Dataset& data, Family family, const Coefficients& coef,
                    double lambda) {
  if (!(lambda > 0.0)) throw OutOfRange("kkt_check needs lambda > 0");
  const Vector eta = (data.X * coef.beta).array() + coef.intercept;
  const Vector g = data.X.transpose() * raw_residual(family, data, eta);
  KktReport rep;
  for (Index j = 0; j < data.p(); ++j) {
    if (coef.beta[j] == 0.0) {
      rep.max_violation_inactive =
          std::max(rep.max_violation_inactive, std::abs(g[j]) - lambda);
    } else {
      rep.max_violation_active =
          std::max(rep.max_violation_active, std::abs(std::abs(g[j]) - lambda));
      if ((g[j] > 0.0) != (coef.beta[j] > 0.0)) ++rep.sign_mismatches;
    }
  }
  rep.max_violation_inactive = std::max(rep.max_violation_inactive, 0.0);
  return rep;
}

namespace {

constexpr double kWeightFloor = 1e-5;
constexpr double kSaturationRatio = 1e-10;
constexpr int kMaxOuter = 100;
constexpr int kMaxHalvings = 40;

/// One-lambda solver state shared along the path for warm starts.
class PathSolver {
 public:
  PathSolver(const Dataset& data, Family family, const PathConfig& cfg)
      : data_(data),
        family_(family),
        cfg_(cfg),
        n_(data.n()),
        p_(data.p()),
        beta_(Vector::Zero(data.p())),
        intercept_(null_intercept(family, data)),
        eta_(Vector::Constant(data.n(), null_intercept(family, data))),
        in_screen_(static_cast<size_t>(data.p()), false) {}

  /// Fits at `lambda`, warm-started from the current state.  `lambda_prev`
  /// feeds the sequential screen; pass lambda_max for the first point.
  void fit_one(double lambda, double lambda_prev) {
    long sweeps_left = cfg_.max_iter;
    double tol = cfg_.tol;

    build_screen(lambda, lambda_prev);
    for (int guard = 0; guard < 60; ++guard) {
      solve_on_screen(lambda, tol, sweeps_left);
      // Full KKT verification on the true residual.  Screen misses are
      // admitted and re-solved; residual stationarity gaps tighten tol.
      const Vector eps = raw_residual(family_, data_, eta_);
      const Vector g = data_.X.transpose() * eps;
      bool grew = false;
      for (Index j = 0; j < p_; ++j) {
        if (!in_screen_[static_cast<size_t>(j)] && std::abs(g[j]) > lambda) {
          in_screen_[static_cast<size_t>(j)] = true;
          screen_.push_back(j);
          grew = true;
        }
      }
      if (grew) {
        std::sort(screen_.begin(), screen_.end());
        continue;
      }
      double viol = 0.0;
      bool signs_ok = true;
      for (Index j = 0; j < p_; ++j) {
        if (beta_[j] == 0.0) {
          viol = std::max(viol, std::abs(g[j]) - lambda);
        } else {
          viol = std::max(viol, std::abs(std::abs(g[j]) - lambda));
          if ((g[j] > 0.0) != (beta_[j] > 0.0)) signs_ok = false;
        }
      }
      if (viol < 0.9e-6 * lambda && signs_ok) return;
      tol = std::max(tol * 0.1, 1e-15);
    }
    throw NonConvergence("KKT tolerance not reached", lambda,
                         cfg_.max_iter - sweeps_left);
  }

  const Vector& beta() const { return beta_; }
  double intercept() const { return intercept_; }
  Vector true_residual() const { return raw_residual(family_, data_, eta_); }
  Index active_count() const {
    Index c = 0;
    for (Index j = 0; j < p_; ++j)
      if (beta_[j] != 0.0) ++c;
    return c;
  }

 private:
  void build_screen(double lambda, double lambda_prev) {
    const Vector g_prev = data_.X.transpose() * raw_residual(family_, data_, eta_);
    const double cutoff = 2.0 * lambda - lambda_prev;
    screen_.clear();
    for (Index j = 0; j < p_; ++j) {
      const bool keep = beta_[j] != 0.0 || std::abs(g_prev[j]) >= cutoff;
      in_screen_[static_cast<size_t>(j)] = keep;
      if (keep) screen_.push_back(j);
    }
  }

  double penalized_objective(double lambda) const {
    double nll;
    try {
      nll = neg_log_likelihood(family_, data_, eta_);
    } catch (const NumericalOverflow&) {
      return std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(nll)) return std::numeric_limits<double>::infinity();
    return nll + lambda * beta_.lpNorm<1>();
  }

  /// IRLS outer loop (a single exact pass for Gaussian) on the current screen.
  void solve_on_screen(double lambda, double tol, long& sweeps_left) {
    const bool gaussian = family_ == Family::Gaussian;
    const bool has_intercept = family_ != Family::CoxPH;
    double f_prev = penalized_objective(lambda);

    for (int outer = 0; outer < kMaxOuter; ++outer) {
      Vector w, u;
      if (gaussian) {
        w = Vector::Ones(n_);
        u = data_.y;
      } else {
        const Vector eps = raw_residual(family_, data_, eta_);
        w = irls_weights(family_, data_, eta_).cwiseMax(kWeightFloor);
        u = eta_ + (eps.array() / w.array()).matrix();
      }

      const Vector beta_old = beta_;
      const double intercept_old = intercept_;
      cd_solve(w, u, lambda, tol, has_intercept, sweeps_left);

      // Step halving keeps the true penalized objective non-increasing even
      // where the quadratic model overshoots.
      double f_new = penalized_objective(lambda);
      for (int h = 0; h < kMaxHalvings && f_new > f_prev + 1e-12 * (1.0 + std::abs(f_prev)); ++h) {
        beta_ = 0.5 * (beta_ + beta_old);
        intercept_ = 0.5 * (intercept_ + intercept_old);
        refresh_eta();
        f_new = penalized_objective(lambda);
      }

      const double outer_change = std::max(
          (beta_ - beta_old).cwiseAbs().maxCoeff(), std::abs(intercept_ - intercept_old));
      f_prev = f_new;
      if (gaussian || outer_change < tol) return;
    }
    throw NonConvergence("IRLS did not converge", lambda, kMaxOuter);
  }

  void refresh_eta() {
    eta_ = (data_.X * beta_).array() + intercept_;
  }

  /// Penalized weighted least squares by coordinate descent on the screen:
  /// full sweep, active-set cycling to tolerance, then a verification sweep.
  void cd_solve(const Vector& w, const Vector& u, double lambda, double tol,
                bool has_intercept, long& sweeps_left) {
    refresh_eta();  // clear incremental drift before a fresh residual is formed
    Vector r = u - eta_;
    Vector col_sq = Vector::Zero(p_);
    for (Index j : screen_)
      col_sq[j] = (w.array() * data_.X.col(j).array().square()).sum();
    const double w_sum = w.sum();

    auto update_one = [&](Index j) -> double {
      if (col_sq[j] <= 0.0) return 0.0;
      const double z =
          (w.array() * data_.X.col(j).array() * r.array()).sum() + col_sq[j] * beta_[j];
      const double bj = soft_threshold(z, lambda) / col_sq[j];
      const double delta = bj - beta_[j];
      if (delta != 0.0) {
        r -= delta * data_.X.col(j);
        eta_ += delta * data_.X.col(j);
        beta_[j] = bj;
      }
      return std::abs(delta);
    };
    auto update_intercept = [&]() -> double {
      if (!has_intercept) return 0.0;
      const double delta = (w.array() * r.array()).sum() / w_sum;
      if (delta != 0.0) {
        intercept_ += delta;
        r.array() -= delta;
        eta_.array() += delta;
      }
      return std::abs(delta);
    };
    auto sweep = [&](const std::vector<Index>& idx) -> double {
      if (--sweeps_left < 0)
        throw NonConvergence("coordinate sweep budget exhausted", lambda, cfg_.max_iter);
      double maxd = update_intercept();
      for (Index j : idx) maxd = std::max(maxd, update_one(j));
      return maxd;
    };

    for (;;) {
      double maxd = sweep(screen_);
      if (maxd < tol) return;
      std::vector<Index> active;
      for (Index j : screen_)
        if (beta_[j] != 0.0) active.push_back(j);
      do {
        maxd = sweep(active);
      } while (maxd >= tol);
      // Verification sweep over the whole screen; a quiet pass ends the solve.
      maxd = sweep(screen_);
      if (maxd < tol) return;
    }
  }

  const Dataset& data_;
  const Family family_;
  const PathConfig& cfg_;
  const Index n_;
  const Index p_;

  Vector beta_;
  double intercept_;
  Vector eta_;
  std::vector<Index> screen_;
  std::vector<bool> in_screen_;
};

}  // namespace

LassoPath fit_path(const Dataset& data, Family family, const PathConfig& config,
                   const std::optional<Vector>& lambdas) {
  validate_dataset(data, family);
  if (!(config.tol > 0.0)) throw OutOfRange("tol must be positive");
  if (!(config.min_ratio > 0.0 && config.min_ratio < 1.0))
    throw OutOfRange("min_ratio must lie in (0,1)");
  if (config.max_iter < 1) throw OutOfRange("max_iter must be positive");

  const double lam_max = lambda_max(data, family);
  Vector grid;
  if (lambdas) {
    grid = *lambdas;
    if (grid.size() == 0) throw OutOfRange("empty lambda grid");
    for (Index k = 0; k < grid.size(); ++k) {
      if (!(grid[k] > 0.0)) throw OutOfRange("lambda grid must be positive");
      if (k > 0 && !(grid[k] < grid[k - 1]))
        throw OutOfRange("lambda grid must be strictly decreasing");
    }
  } else {
    if (lam_max == 0.0)
      throw DegenerateResponse("intercept-only fit is exact; no path to build");
    grid = default_lambda_grid(lam_max, config.n_lambda, config.min_ratio);
  }

  const Index p = data.p();
  const Index K = grid.size();
  LassoPath path;
  path.lambdas.resize(K);
  path.betas.resize(p, K);
  path.intercepts.resize(K);
  path.residual_norms.resize(K);
  path.lambda_fpc.resize(K);

  PathSolver solver(data, family, config);
  const double y_norm = data.y.norm();
  Index kept = 0;
  double lambda_prev = std::max(lam_max, grid[0]);
  for (Index k = 0; k < K; ++k) {
    // At lambda >= lambda_max the zero vector with the intercept-only fit is
    // the exact optimum; solving numerically would only admit rounding noise.
    if (grid[k] < lam_max) solver.fit_one(grid[k], lambda_prev);
    lambda_prev = grid[k];

    const double rnorm = solver.true_residual().norm();
    if (rnorm < kSaturationRatio * y_norm) {
      if (kept == 0) throw SaturatedFit("residual vanished at the first grid point");
      break;
    }
    if (config.max_active >= 0 && solver.active_count() > config.max_active) {
      if (kept == 0) throw OutOfRange("max_active exceeded at the first grid point");
      break;
    }
    path.lambdas[kept] = grid[k];
    path.betas.col(kept) = solver.beta();
    path.intercepts[kept] = solver.intercept();
    path.residual_norms[kept] = rnorm;
    path.lambda_fpc[kept] = grid[k] / rnorm;
    ++kept;
  }

  path.lambdas.conservativeResize(kept);
  path.betas.conservativeResize(p, kept);
  path.intercepts.conservativeResize(kept);
  path.residual_norms.conservativeResize(kept);
  path.lambda_fpc.conservativeResize(kept);
  return path;
}

}  // namespace fpc
