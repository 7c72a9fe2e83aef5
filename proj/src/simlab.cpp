#include "fpclasso/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "fpclasso/errors.hpp"
#include "fpclasso/parallel.hpp"
#include "fpclasso/preprocess.hpp"
#include "fpclasso/rng.hpp"

namespace fpc {

namespace {

double draw_column_value(ColumnDist dist, Rng& rng) {
  switch (dist) {
    case ColumnDist::Gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      return g(rng);
    }
    case ColumnDist::Binomial: {
      std::bernoulli_distribution b(0.5);
      return b(rng) ? 1.0 : 0.0;
    }
    case ColumnDist::Exponential: {
      std::exponential_distribution<double> e(1.0);
      return e(rng);
    }
  }
  throw OutOfRange("unknown column distribution");
}

void validate_design(const DesignSpec& spec) {
  if (spec.n < 1 || spec.p < 1) throw OutOfRange("design needs n >= 1 and p >= 1");
  if (spec.n_signal < 0 || spec.n_signal > spec.p)
    throw OutOfRange("signal block size must lie in [0, p]");
  if (!(spec.noise_corr >= 0.0 && spec.noise_corr < 1.0))
    throw OutOfRange("noise_corr must lie in [0, 1)");
  if (spec.noise_corr > 0.0 && spec.column_dist != ColumnDist::Gaussian)
    throw UnsupportedCorrelation(
        "correlated null blocks are only defined for Gaussian columns");
}

// Type-7 quantile on a sorted vector.
double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return 0.0;
  const double h = static_cast<double>(v.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

}  // namespace

std::string column_dist_name(ColumnDist dist) {
  switch (dist) {
    case ColumnDist::Gaussian:
      return "gaussian";
    case ColumnDist::Binomial:
      return "binomial";
    case ColumnDist::Exponential:
      return "exponential";
  }
  throw OutOfRange("unknown column distribution");
}

ColumnDist parse_column_dist(const std::string& name) {
  if (name == "gaussian") return ColumnDist::Gaussian;
  if (name == "binomial") return ColumnDist::Binomial;
  if (name == "exponential") return ColumnDist::Exponential;
  throw OutOfRange("unknown column distribution '" + name +
                   "'; expected gaussian, binomial, or exponential");
}

Matrix gen_design(const DesignSpec& spec) {
  validate_design(spec);
  Rng rng = make_rng(spec.seed);
  Matrix X(spec.n, spec.p);

  for (Index j = 0; j < spec.n_signal; ++j)
    for (Index i = 0; i < spec.n; ++i) X(i, j) = draw_column_value(spec.column_dist, rng);

  if (spec.noise_corr == 0.0) {
    for (Index j = spec.n_signal; j < spec.p; ++j)
      for (Index i = 0; i < spec.n; ++i)
        X(i, j) = draw_column_value(spec.column_dist, rng);
    return X;
  }

  // Shared-factor construction: X_j = sqrt(rho) z0 + sqrt(1-rho) z_j gives
  // unit variance and exact pairwise correlation rho over the null block.
  std::normal_distribution<double> g(0.0, 1.0);
  Vector z0(spec.n);
  for (Index i = 0; i < spec.n; ++i) z0[i] = g(rng);
  const double a = std::sqrt(spec.noise_corr);
  const double b = std::sqrt(1.0 - spec.noise_corr);
  for (Index j = spec.n_signal; j < spec.p; ++j)
    for (Index i = 0; i < spec.n; ++i) X(i, j) = a * z0[i] + b * g(rng);
  return X;
}

SimResponse gen_response(const Matrix& X, const SignalSpec& signal,
                         const ResponseSpec& resp, std::uint64_t seed) {
  const Index n = X.rows();
  const Index k = signal.k;
  if (k < 0 || k > X.cols()) throw OutOfRange("signal size must lie in [0, p]");
  if (k >= n) throw OutOfRange("signal size must be below n");
  if (!(resp.censor_fraction_target >= 0.0 && resp.censor_fraction_target < 1.0))
    throw OutOfRange("censor_fraction_target must lie in [0, 1)");

  const Vector eta = X.leftCols(k) * Vector::Constant(k, signal.beta_magnitude);
  Rng rng = make_rng(seed);
  SimResponse out;
  out.y.resize(n);

  switch (resp.family) {
    case Family::Gaussian: {
      if (!(resp.gaussian_sd >= 0.0)) throw OutOfRange("gaussian_sd must be >= 0");
      std::normal_distribution<double> g(0.0, 1.0);
      for (Index i = 0; i < n; ++i) out.y[i] = eta[i] + resp.gaussian_sd * g(rng);
      return out;
    }
    case Family::Logistic: {
      for (Index i = 0; i < n; ++i) {
        const double prob = 1.0 / (1.0 + std::exp(-eta[i]));
        std::bernoulli_distribution b(prob);
        out.y[i] = b(rng) ? 1.0 : 0.0;
      }
      return out;
    }
    case Family::Poisson: {
      for (Index i = 0; i < n; ++i) {
        std::poisson_distribution<long> pois(std::exp(eta[i]));
        out.y[i] = static_cast<double>(pois(rng));
      }
      return out;
    }
    case Family::CoxPH: {
      const double c = resp.censor_fraction_target;
      const double censor_rate = c / (1.0 - c);
      out.event.resize(n);
      for (Index i = 0; i < n; ++i) {
        std::exponential_distribution<double> ev(std::exp(eta[i]));
        const double t = ev(rng);
        if (censor_rate > 0.0) {
          std::exponential_distribution<double> cz(censor_rate);
          const double cobs = cz(rng);
          out.y[i] = std::min(t, cobs);
          out.event[i] = t <= cobs ? 1 : 0;
        } else {
          out.y[i] = t;
          out.event[i] = 1;
        }
      }
      return out;
    }
  }
  throw UnsupportedFamily("unknown response family");
}

namespace {

SimResult run_grid(const DesignSpec& design_in, const SignalSpec& signal,
                   const ResponseSpec& resp, const std::vector<double>& targets,
                   const std::vector<double>& rhos, Index replicates,
                   const PathConfig& config, int threads) {
  DesignSpec design = design_in;
  design.n_signal = signal.k;  // the signal support defines the block split
  validate_design(design);
  if (signal.k >= design.n) throw OutOfRange("signal size must be below n");
  if (replicates < 1) throw OutOfRange("need at least one replicate");
  if (targets.empty()) throw OutOfRange("need at least one target");
  if (rhos.empty()) throw OutOfRange("need at least one correlation level");
  for (double t : targets)
    if (!(t > 0.0 && t < 2.0 * static_cast<double>(design.p)))
      throw OutOfRange("targets must lie strictly between 0 and 2p");
  for (double r : rhos) {
    DesignSpec probe = design;  // reject bad correlation levels before any cell runs
    probe.noise_corr = r;
    validate_design(probe);
  }

  const auto n_rho = static_cast<Index>(rhos.size());
  const auto n_tgt = static_cast<Index>(targets.size());

  SimResult result;
  result.design = design;
  result.signal = signal;
  result.response = resp;
  result.targets = targets;
  result.rhos = rhos;
  result.replicates = replicates;
  result.cells.resize(static_cast<std::size_t>(replicates * n_rho * n_tgt));

  parallel_for_indexed(replicates, threads, [&](std::int64_t rep) {
    const std::uint64_t rep_seed =
        child_seed(design.seed, static_cast<std::uint64_t>(rep));
    for (Index ri = 0; ri < n_rho; ++ri) {
      const std::size_t base =
          static_cast<std::size_t>(rep * n_rho * n_tgt + ri * n_tgt);
      for (Index ti = 0; ti < n_tgt; ++ti) {
        SimCell& cell = result.cells[base + static_cast<std::size_t>(ti)];
        cell.replicate = static_cast<Index>(rep);
        cell.rho = rhos[static_cast<std::size_t>(ri)];
        cell.target_fp = targets[static_cast<std::size_t>(ti)];
      }

      DesignSpec d = design;
      d.noise_corr = rhos[static_cast<std::size_t>(ri)];
      d.seed = child_seed(rep_seed, 2 * static_cast<std::uint64_t>(ri));
      const std::uint64_t resp_seed =
          child_seed(rep_seed, 2 * static_cast<std::uint64_t>(ri) + 1);

      std::string gen_error;
      Dataset data;
      try {
        PreprocessRecord record;
        data.X = preprocess_design(gen_design(d), record);
        if (data.X.cols() != design.p)
          throw DegenerateColumn("a generated column was dropped as constant");
        SimResponse rr = gen_response(data.X, signal, resp, resp_seed);
        data.y = std::move(rr.y);
        data.event = std::move(rr.event);
      } catch (const Error& e) {
        gen_error = e.what();
      }

      for (Index ti = 0; ti < n_tgt; ++ti) {
        SimCell& cell = result.cells[base + static_cast<std::size_t>(ti)];
        if (!gen_error.empty()) {
          cell.failed = true;
          cell.error = gen_error;
          continue;
        }
        try {
          const FpcSolution sol = solve_fpc_standardized(
              data, resp.family, FpcTarget::fp(cell.target_fp), config);
          for (Index j : sol.active_set)
            j < signal.k ? ++cell.observed_tp : ++cell.observed_fp;
          cell.lambda_fpc_used = sol.lambda_fpc;
        } catch (const Error& e) {
          cell.failed = true;
          cell.error = e.what();
        }
      }
    }
  });

  for (Index ri = 0; ri < n_rho; ++ri) {
    for (Index ti = 0; ti < n_tgt; ++ti) {
      SimAggregate agg;
      agg.rho = rhos[static_cast<std::size_t>(ri)];
      agg.target_fp = targets[static_cast<std::size_t>(ti)];
      std::vector<double> fps, tps;
      for (Index rep = 0; rep < replicates; ++rep) {
        const SimCell& cell = result.cells[static_cast<std::size_t>(
            rep * n_rho * n_tgt + ri * n_tgt + ti)];
        if (cell.failed) {
          ++agg.n_failed;
          continue;
        }
        fps.push_back(static_cast<double>(cell.observed_fp));
        tps.push_back(static_cast<double>(cell.observed_tp));
      }
      agg.n_ok = static_cast<Index>(fps.size());
      std::sort(fps.begin(), fps.end());
      std::sort(tps.begin(), tps.end());
      if (agg.n_ok > 0) {
        double fp_sum = 0.0, tp_sum = 0.0;
        for (double v : fps) fp_sum += v;
        for (double v : tps) tp_sum += v;
        agg.fp_mean = fp_sum / static_cast<double>(agg.n_ok);
        agg.tp_mean = tp_sum / static_cast<double>(agg.n_ok);
        agg.fp_q1 = quantile_sorted(fps, 0.25);
        agg.fp_median = quantile_sorted(fps, 0.5);
        agg.fp_q3 = quantile_sorted(fps, 0.75);
        agg.tp_q1 = quantile_sorted(tps, 0.25);
        agg.tp_median = quantile_sorted(tps, 0.5);
        agg.tp_q3 = quantile_sorted(tps, 0.75);
      }
      result.n_failed_total += agg.n_failed;
      result.aggregates.push_back(agg);
    }
  }

  const auto total = static_cast<double>(result.cells.size());
  if (static_cast<double>(result.n_failed_total) > 0.01 * total) {
    std::string first;
    for (const SimCell& c : result.cells)
      if (c.failed) {
        first = c.error;
        break;
      }
    throw Error("simulation campaign aborted: " +
                std::to_string(result.n_failed_total) + " of " +
                std::to_string(result.cells.size()) +
                " cells failed; first error: " + first);
  }
  return result;
}

}  // namespace

SimResult run_fp_experiment(const DesignSpec& design, const SignalSpec& signal,
                            const ResponseSpec& resp,
                            const std::vector<double>& targets, Index replicates,
                            const PathConfig& config, int threads) {
  return run_grid(design, signal, resp, targets, {design.noise_corr}, replicates,
                  config, threads);
}

SimResult run_corr_experiment(const DesignSpec& design, const SignalSpec& signal,
                              const ResponseSpec& resp,
                              const std::vector<double>& rho_list, double target_fp,
                              Index replicates, const PathConfig& config,
                              int threads) {
  return run_grid(design, signal, resp, {target_fp}, rho_list, replicates, config,
                  threads);
}

SimResult run_tp_experiment(const DesignSpec& design, const SignalSpec& signal,
                            const ResponseSpec& resp,
                            const std::vector<double>& targets, Index replicates,
                            const PathConfig& config, int threads) {
  return run_grid(design, signal, resp, targets, {design.noise_corr}, replicates,
                  config, threads);
}

double post_hoc_fdr(const FpcSolution& solution) {
  if (solution.active_set.empty()) return 0.0;
  return std::min(1.0, solution.fp_bound /
                           static_cast<double>(solution.active_set.size()));
}

}  // namespace fpc
