#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpclasso/fpc.hpp"
#include "fpclasso/types.hpp"

namespace fpc {

enum class ColumnDist { Gaussian, Binomial, Exponential };

std::string column_dist_name(ColumnDist dist);
ColumnDist parse_column_dist(const std::string& name);

// Design layout: the first n_signal columns form the signal block S, the rest
// the null block F. noise_corr is the pairwise equicorrelation over F only;
// the two blocks are generated independently of each other.
struct DesignSpec {
  Index n = 0;
  Index p = 0;
  Index n_signal = 0;
  ColumnDist column_dist = ColumnDist::Gaussian;
  double noise_corr = 0.0;
  std::uint64_t seed = 0;
};

// True model: beta_magnitude on the first k columns, zero elsewhere.
struct SignalSpec {
  Index k = 0;
  double beta_magnitude = 1.0;
};

struct ResponseSpec {
  Family family = Family::Gaussian;
  double gaussian_sd = 1.0;
  // Survival only: expected censoring fraction at a null model. The censoring
  // rate r = c/(1-c) comes from P(censor) = r/(1+r) for competing
  // exponentials; c = 0 disables censoring.
  double censor_fraction_target = 0.25;
};

// One replicate at one (target, rho) grid point.
struct SimCell {
  Index replicate = 0;
  double target_fp = 0.0;
  double rho = 0.0;
  Index observed_fp = 0;
  Index observed_tp = 0;
  double lambda_fpc_used = 0.0;
  bool failed = false;
  std::string error;
};

struct SimAggregate {
  double target_fp = 0.0;
  double rho = 0.0;
  Index n_ok = 0;
  Index n_failed = 0;
  double fp_mean = 0.0, fp_q1 = 0.0, fp_median = 0.0, fp_q3 = 0.0;
  double tp_mean = 0.0, tp_q1 = 0.0, tp_median = 0.0, tp_q3 = 0.0;
};

struct SimResult {
  DesignSpec design;  // noise_corr holds the first rho when several were run
  SignalSpec signal;
  ResponseSpec response;
  std::vector<double> targets;
  std::vector<double> rhos;
  Index replicates = 0;
  std::vector<SimCell> cells;  // replicate-major, then rho, then target
  std::vector<SimAggregate> aggregates;
  Index n_failed_total = 0;
};

// Raw design draw; callers standardize downstream. Throws
// UnsupportedCorrelation for noise_corr > 0 with non-Gaussian columns.
Matrix gen_design(const DesignSpec& spec);

// Response drawn at the true model on a preprocessed design. event is empty
// except for the survival family, where y holds observed times.
struct SimResponse {
  Vector y;
  IntVector event;
};
SimResponse gen_response(const Matrix& X, const SignalSpec& signal,
                         const ResponseSpec& resp, std::uint64_t seed);

// Runs replicates x targets cells: fresh design and response per replicate,
// one calibrated fit per target. Cells that throw are marked failed and
// excluded from aggregates; more than 1% failures aborts the campaign.
SimResult run_fp_experiment(const DesignSpec& design, const SignalSpec& signal,
                            const ResponseSpec& resp,
                            const std::vector<double>& targets, Index replicates,
                            const PathConfig& config, int threads = 1);

// Same engine across correlation levels at a single target.
SimResult run_corr_experiment(const DesignSpec& design, const SignalSpec& signal,
                              const ResponseSpec& resp,
                              const std::vector<double>& rho_list, double target_fp,
                              Index replicates, const PathConfig& config,
                              int threads = 1);

// Same engine; read the tp aggregates.
SimResult run_tp_experiment(const DesignSpec& design, const SignalSpec& signal,
                            const ResponseSpec& resp,
                            const std::vector<double>& targets, Index replicates,
                            const PathConfig& config, int threads = 1);

// min(1, fp_bound / |active|); 0 for an empty active set.
double post_hoc_fdr(const FpcSolution& solution);

}  // namespace fpc
