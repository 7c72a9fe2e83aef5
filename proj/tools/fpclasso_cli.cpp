// fpclasso: fit an FP-budgeted lasso on a CSV table, drive simulation
// campaigns, sample self-normalized-sum Q-Q data, and report the lambda
// mapping diagnostic.
//
// Exit codes: 0 ok; 1 internal failure; 2 unusable input or arguments;
// 3 degenerate response; 4 target above the empty-model level (report is
// still written); 5 non-monotone lambda mapping (diagnostic is written).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fpclasso/campaign.hpp"
#include "fpclasso/csv.hpp"
#include "fpclasso/errors.hpp"
#include "fpclasso/fpc.hpp"
#include "fpclasso/normal.hpp"
#include "fpclasso/report.hpp"
#include "fpclasso/rwsns.hpp"
#include "fpclasso/version.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitAboveMax = 4;
constexpr int kExitNonMonotone = 5;

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::string output;  // empty or "-" means stdout for single-file commands
};

std::string num(double v) { return Json(v).dump(); }

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fpc::Error("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw fpc::Error("short write on output file: " + path);
}

// fig2.json + "_cells.csv" -> fig2_cells.csv; a name without .json just
// gets the suffix appended.
std::string sibling(const std::string& path, const std::string& suffix) {
  static const std::string ext = ".json";
  std::string stem = path;
  if (stem.size() >= ext.size() &&
      stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0)
    stem.resize(stem.size() - ext.size());
  return stem + suffix;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fpc::MalformedInput("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Options shared by the table-reading commands.
struct TableArgs {
  std::string input;
  std::string family;
  std::string response;
  std::string time_col;
  std::string event_col;
};

void add_table_flags(CLI::App* cmd, TableArgs& args) {
  cmd->add_option("--input", args.input, "input CSV file, header row required")
      ->required();
  cmd->add_option("--family", args.family,
                  "response family: gaussian, logistic, poisson, cox")
      ->required();
  cmd->add_option("--response", args.response, "response column name");
  cmd->add_option("--time-col", args.time_col, "survival time column (cox)");
  cmd->add_option("--event-col", args.event_col, "event indicator column (cox)");
}

struct LoadedTable {
  fpc::Dataset raw;
  fpc::Dataset standardized;
  fpc::PreprocessRecord record;
  std::vector<std::string> feature_names;
};

LoadedTable load_table(const TableArgs& args, fpc::Family family) {
  LoadedTable t;
  const fpc::CsvTable table = fpc::read_csv(args.input);
  t.raw = fpc::table_to_dataset(table, family, args.response, args.time_col,
                                args.event_col, t.feature_names);
  fpc::validate_dataset(t.raw, family);
  t.standardized.X = fpc::preprocess_design(t.raw.X, t.record);
  t.standardized.y = t.raw.y;
  t.standardized.event = t.raw.event;
  if (t.standardized.X.cols() == 0)
    throw fpc::MalformedInput("every feature column is constant");
  return t;
}

std::string serialize_diagnostic(const fpc::RegularityDiagnostic& diag,
                                 fpc::Family family, std::uint64_t seed) {
  Json j;
  j["tool"] = fpc::kToolName;
  j["version"] = fpc::kVersion;
  j["family"] = fpc::family_name(family);
  j["seed"] = seed;
  j["monotone"] = diag.monotone;
  j["violations"] = diag.n_violations;
  j["max_violation"] = diag.max_violation_magnitude;
  j["table"] = Json::array();
  for (const auto& [lambda, lambda_fpc] : diag.lambda_pairs)
    j["table"].push_back(Json{{"lambda", lambda}, {"lambda_fpc", lambda_fpc}});
  return j.dump(2) + "\n";
}

// ---- fit ----

struct FitArgs {
  TableArgs table;
  std::optional<double> expected_fp;
  std::optional<double> lambda_fpc;
  bool timing = false;
};

int run_fit(const FitArgs& args, const GlobalOpts& global) {
  const auto t0 = std::chrono::steady_clock::now();
  const fpc::Family family = fpc::parse_family(args.table.family);
  if (args.expected_fp.has_value() == args.lambda_fpc.has_value())
    throw fpc::MalformedInput("set exactly one of --expected-fp and --lambda-fpc");
  const fpc::FpcTarget target = args.expected_fp
                                    ? fpc::FpcTarget::fp(*args.expected_fp)
                                    : fpc::FpcTarget::lambda(*args.lambda_fpc);

  LoadedTable t = load_table(args.table, family);

  // Mapping diagnostic before the search, so a failed search still reports it.
  const fpc::PathConfig config;
  const fpc::LassoPath path = fpc::fit_path(t.standardized, family, config);
  const fpc::RegularityDiagnostic diag = fpc::regularity_check(path);

  fpc::FpcSolution sol;
  try {
    sol = fpc::solve_fpc_standardized(t.standardized, family, target, config);
  } catch (const fpc::RegularityViolation& e) {
    fpc::RegularityDiagnostic failed = diag;
    if (failed.monotone) {
      // The violation surfaced on the solver's refined grid; carry its counts.
      failed.monotone = false;
      failed.n_violations = e.n_violations;
      failed.max_violation_magnitude = e.max_magnitude;
    }
    write_text(global.output, serialize_diagnostic(failed, family, global.seed));
    throw;
  }
  sol.preprocessing = t.record;

  fpc::FitReport report =
      fpc::build_fit_report(sol, diag, family, t.feature_names, global.seed);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (args.timing) report.timing_seconds = elapsed;
  write_text(global.output, fpc::serialize_fit_report(report));
  return sol.target_above_max ? kExitAboveMax : 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config_path;
};

int run_simulate(const SimulateArgs& args, const GlobalOpts& global) {
  fpc::Campaign campaign = fpc::parse_campaign(read_file(args.config_path));
  if (global.seed_given) campaign.design.seed = global.seed;
  const fpc::SimResult result = fpc::run_campaign(campaign, global.threads);

  const std::string out = (global.output.empty() || global.output == "-")
                              ? "simulate.json"
                              : global.output;
  write_text(out, fpc::serialize_sim_result(result));
  write_text(sibling(out, "_cells.csv"), fpc::sim_cells_csv(result));
  write_text(sibling(out, "_plot.csv"), fpc::sim_plot_csv(result));
  return 0;
}

// ---- qq ----

struct QqArgs {
  std::string b_dist = "gaussian";
  std::string a_dist = "gaussian";
  fpc::Index n = 100;
  fpc::Index m = 1000;
  fpc::Index mc_reps = 100000;
  std::string standardization = "theoretical";
};

int run_qq(const QqArgs& args, const GlobalOpts& global) {
  const fpc::RwDistSpec b = fpc::parse_rw_dist(args.b_dist);
  const fpc::RwDistSpec a = fpc::parse_rw_dist(args.a_dist);
  fpc::Standardize mode;
  if (args.standardization == "theoretical")
    mode = fpc::Standardize::Theoretical;
  else if (args.standardization == "empirical")
    mode = fpc::Standardize::Empirical;
  else
    throw fpc::MalformedInput("standardization must be theoretical or empirical");

  const fpc::RwsnsSampleSet samples = fpc::sample_rwsns(
      b, a, args.n, args.m, global.seed, mode, global.threads);
  fpc::DistanceReport report = fpc::empirical_distance(samples);
  // Separate stream for the bound's noise-vector draws.
  const fpc::DistanceReport bounds =
      fpc::lemma3_bounds(b, a, args.n, args.mc_reps,
                         global.seed ^ 0x9e3779b97f4a7c15ULL, global.threads);
  report.xi3 = bounds.xi3;
  report.delta = bounds.delta;
  report.bound_K = bounds.bound_K;
  report.bound_W = bounds.bound_W;

  const std::string out =
      (global.output.empty() || global.output == "-") ? "qq.json" : global.output;
  Json j;
  j["tool"] = fpc::kToolName;
  j["version"] = fpc::kVersion;
  j["b_dist"] = fpc::rw_dist_name(b);
  j["a_dist"] = fpc::rw_dist_name(a);
  j["n"] = args.n;
  j["m"] = args.m;
  j["mc_reps"] = args.mc_reps;
  j["seed"] = global.seed;
  j["standardization"] = args.standardization;
  j["d_K"] = report.d_K;
  j["d_W"] = report.d_W;
  j["xi3"] = report.xi3;
  j["delta"] = report.delta;
  j["bound_K"] = report.bound_K;
  j["bound_W"] = report.bound_W;
  write_text(out, j.dump(2) + "\n");

  fpc::Vector sorted = samples.values;
  std::sort(sorted.begin(), sorted.end());
  std::string csv = fpc::csv_record({"theoretical", "empirical"});
  for (fpc::Index i = 0; i < sorted.size(); ++i) {
    const double q = fpc::norm_quantile((static_cast<double>(i) + 0.5) /
                                        static_cast<double>(sorted.size()));
    csv += fpc::csv_record({num(q), num(sorted[i])});
  }
  write_text(sibling(out, "_pairs.csv"), csv);
  return 0;
}

// ---- diagnose ----

struct DiagnoseArgs {
  TableArgs table;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  int n_lambda = 100;
  double min_ratio = 0.01;
};

int run_diagnose(const DiagnoseArgs& args, const GlobalOpts& global) {
  const fpc::Family family = fpc::parse_family(args.table.family);
  if (args.lambda_min && args.lambda_max && *args.lambda_min > *args.lambda_max)
    throw fpc::MalformedInput("--lambda-min exceeds --lambda-max");

  LoadedTable t = load_table(args.table, family);

  const double lam_hi =
      args.lambda_max ? *args.lambda_max : fpc::lambda_max(t.standardized, family);
  const double lam_lo = args.lambda_min ? *args.lambda_min : args.min_ratio * lam_hi;
  if (!(lam_hi > 0.0 && lam_lo > 0.0))
    throw fpc::MalformedInput("lambda grid ends must be positive");
  if (lam_lo > lam_hi)
    throw fpc::MalformedInput("--lambda-min exceeds the path's lambda_max");

  fpc::PathConfig config;
  config.n_lambda = args.n_lambda;
  const fpc::Vector grid = fpc::default_lambda_grid(
      lam_hi, std::max(args.n_lambda, 2), lam_lo / lam_hi);
  const fpc::LassoPath path = fpc::fit_path(t.standardized, family, config, grid);
  const fpc::RegularityDiagnostic diag = fpc::regularity_check(path);
  write_text(global.output, serialize_diagnostic(diag, family, global.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse GLM selection with an expected false positive budget"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--seed", global.seed, "seed for all random draws (default 0)");
  app.add_option("--threads", global.threads, "worker threads for replicated runs")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", global.output,
                 "output path; empty or - writes single-file reports to stdout");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit one model under an FP budget");
  fit->fallthrough();
  add_table_flags(fit, fit_args.table);
  fit->add_option("--expected-fp", fit_args.expected_fp,
                  "expected false positive budget, in (0, 2p)");
  fit->add_option("--lambda-fpc", fit_args.lambda_fpc,
                  "normalized penalty level, bypasses the FP mapping");
  fit->add_flag("--timing", fit_args.timing,
                "embed elapsed seconds in the report (breaks byte determinism)");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "run a simulation campaign");
  simulate->fallthrough();
  simulate->add_option("--config", sim_args.config_path, "campaign JSON file")
      ->required();

  QqArgs qq_args;
  auto* qq = app.add_subcommand(
      "qq", "sample the self-normalized sum against normal quantiles");
  qq->fallthrough();
  qq->add_option("--b-dist", qq_args.b_dist,
                 "weight distribution: gaussian, bernoulli, exponential, exp-logskew");
  qq->add_option("--a-dist", qq_args.a_dist, "noise distribution, same set");
  qq->add_option("--n", qq_args.n, "vector length per replicate")
      ->check(CLI::PositiveNumber);
  qq->add_option("--m", qq_args.m, "number of replicates")
      ->check(CLI::PositiveNumber);
  qq->add_option("--mc-reps", qq_args.mc_reps,
                 "draws for the bound's noise moment estimate")
      ->check(CLI::PositiveNumber);
  qq->add_option("--standardization", qq_args.standardization,
                 "theoretical or empirical draw scaling");

  DiagnoseArgs diag_args;
  auto* diagnose =
      app.add_subcommand("diagnose", "emit the lambda mapping table and verdict");
  diagnose->fallthrough();
  add_table_flags(diagnose, diag_args.table);
  diagnose->add_option("--lambda-min", diag_args.lambda_min, "grid floor override");
  diagnose->add_option("--lambda-max", diag_args.lambda_max, "grid top override");
  diagnose->add_option("--n-lambda", diag_args.n_lambda, "grid size (default 100)")
      ->check(CLI::PositiveNumber);
  diagnose->add_option("--min-ratio", diag_args.min_ratio,
                       "grid floor as a fraction of lambda_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }
  global.seed_given = app.count("--seed") > 0;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    int rc = 0;
    if (fit->parsed())
      rc = run_fit(fit_args, global);
    else if (simulate->parsed())
      rc = run_simulate(sim_args, global);
    else if (qq->parsed())
      rc = run_qq(qq_args, global);
    else
      rc = run_diagnose(diag_args, global);
    std::cerr << "elapsed_seconds="
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                     .count()
              << "\n";
    return rc;
  } catch (const fpc::MalformedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const fpc::OutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const fpc::UnsupportedFamily& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const fpc::UnsupportedCorrelation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const fpc::DegenerateResponse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const fpc::RegularityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonMonotone;
  } catch (const fpc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
