#include "fpclasso/report.hpp"

#include <utility>

#include "fpclasso/csv.hpp"
#include "fpclasso/errors.hpp"
#include "fpclasso/version.hpp"
#include "json.hpp"

namespace fpc {

namespace {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form, shared by JSON and CSV output.
std::string num(double v) { return Json(v).dump(); }

Json feature_to_json(const ActiveFeature& f) {
  return Json{{"name", f.name},
              {"index", f.index},
              {"coef", f.coef},
              {"coef_original", f.coef_original}};
}

Json audit_to_json(const ColumnAudit& a) {
  Json j{{"name", a.name}};
  if (a.shift.has_value())
    j["shift"] = *a.shift;
  else
    j["shift"] = nullptr;
  j["mean"] = a.mean;
  j["scale"] = a.scale;
  j["skew_before"] = a.skew_before;
  j["skew_after"] = a.skew_after;
  j["transform_applied"] = a.transform_applied;
  j["dropped"] = a.dropped;
  return j;
}

const Json& need(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw MalformedInput(std::string("report: missing field '") + key + "'");
  return *it;
}

}  // namespace

std::pair<double, std::vector<double>> originalize_coefficients(
    const Coefficients& coef, const PreprocessRecord& record) {
  if (static_cast<std::size_t>(coef.beta.size()) != record.kept.size())
    throw OutOfRange("coefficient length does not match the preprocessing record");
  double intercept = coef.intercept;
  std::vector<double> original(record.kept.size(), 0.0);
  for (std::size_t j = 0; j < record.kept.size(); ++j) {
    const ColumnRecord& col =
        record.columns[static_cast<std::size_t>(record.kept[j])];
    original[j] = coef.beta[static_cast<Index>(j)] / col.scale;
    intercept -= coef.beta[static_cast<Index>(j)] * col.mean / col.scale;
  }
  return {intercept, std::move(original)};
}

FitReport build_fit_report(const FpcSolution& solution,
                           const RegularityDiagnostic& diagnostic, Family family,
                           const std::vector<std::string>& feature_names,
                           std::uint64_t seed) {
  const PreprocessRecord& record = solution.preprocessing;
  if (feature_names.size() != record.columns.size())
    throw OutOfRange("feature name count does not match the preprocessing record");

  FitReport rep;
  rep.tool = kToolName;
  rep.version = kVersion;
  rep.family = family_name(family);
  rep.seed = seed;
  rep.lambda_fpc = solution.lambda_fpc;
  rep.lambda_classical = solution.lambda_classical;
  rep.fp_bound = solution.fp_bound;
  rep.post_hoc_fdr = post_hoc_fdr(solution);
  rep.target_above_max = solution.target_above_max;

  auto [b0, coefs] = originalize_coefficients(solution.coef, record);
  rep.intercept = solution.coef.intercept;
  rep.intercept_original = b0;
  for (Index j : solution.active_set) {
    ActiveFeature f;
    f.index = j;
    f.name = feature_names[static_cast<std::size_t>(record.kept[static_cast<std::size_t>(j)])];
    f.coef = solution.coef.beta[j];
    f.coef_original = coefs[static_cast<std::size_t>(j)];
    rep.active.push_back(std::move(f));
  }

  rep.regularity_monotone = diagnostic.monotone;
  rep.regularity_violations = diagnostic.n_violations;
  rep.regularity_max_violation = diagnostic.max_violation_magnitude;

  for (std::size_t c = 0; c < record.columns.size(); ++c) {
    const ColumnRecord& col = record.columns[c];
    ColumnAudit audit;
    audit.name = feature_names[c];
    audit.shift = col.shift;
    audit.mean = col.mean;
    audit.scale = col.scale;
    audit.skew_before = col.skew_before;
    audit.skew_after = col.skew_after;
    audit.transform_applied = col.transform_applied;
    audit.dropped = col.dropped;
    rep.preprocessing.push_back(std::move(audit));
  }
  return rep;
}

std::string serialize_fit_report(const FitReport& report) {
  Json j;
  j["tool"] = report.tool;
  j["version"] = report.version;
  j["family"] = report.family;
  j["seed"] = report.seed;
  j["lambda_fpc"] = report.lambda_fpc;
  j["lambda_classical"] = report.lambda_classical;
  j["fp_bound"] = report.fp_bound;
  j["post_hoc_fdr"] = report.post_hoc_fdr;
  j["target_above_max"] = report.target_above_max;
  j["intercept"] = report.intercept;
  j["intercept_original"] = report.intercept_original;
  j["active"] = Json::array();
  for (const auto& f : report.active) j["active"].push_back(feature_to_json(f));
  j["regularity"] = Json{{"monotone", report.regularity_monotone},
                         {"violations", report.regularity_violations},
                         {"max_violation", report.regularity_max_violation}};
  j["preprocessing"] = Json::array();
  for (const auto& a : report.preprocessing)
    j["preprocessing"].push_back(audit_to_json(a));
  if (report.timing_seconds.has_value())
    j["timing_seconds"] = *report.timing_seconds;
  return j.dump(2) + "\n";
}

FitReport parse_fit_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("report: ") + e.what());
  }
  try {
    FitReport rep;
    rep.tool = need(j, "tool").get<std::string>();
    rep.version = need(j, "version").get<std::string>();
    rep.family = need(j, "family").get<std::string>();
    rep.seed = need(j, "seed").get<std::uint64_t>();
    rep.lambda_fpc = need(j, "lambda_fpc").get<double>();
    rep.lambda_classical = need(j, "lambda_classical").get<double>();
    rep.fp_bound = need(j, "fp_bound").get<double>();
    rep.post_hoc_fdr = need(j, "post_hoc_fdr").get<double>();
    rep.target_above_max = need(j, "target_above_max").get<bool>();
    rep.intercept = need(j, "intercept").get<double>();
    rep.intercept_original = need(j, "intercept_original").get<double>();
    for (const auto& f : need(j, "active")) {
      ActiveFeature feat;
      feat.name = need(f, "name").get<std::string>();
      feat.index = need(f, "index").get<Index>();
      feat.coef = need(f, "coef").get<double>();
      feat.coef_original = need(f, "coef_original").get<double>();
      rep.active.push_back(std::move(feat));
    }
    const Json& reg = need(j, "regularity");
    rep.regularity_monotone = need(reg, "monotone").get<bool>();
    rep.regularity_violations = need(reg, "violations").get<int>();
    rep.regularity_max_violation = need(reg, "max_violation").get<double>();
    for (const auto& a : need(j, "preprocessing")) {
      ColumnAudit audit;
      audit.name = need(a, "name").get<std::string>();
      if (!need(a, "shift").is_null()) audit.shift = a["shift"].get<double>();
      audit.mean = need(a, "mean").get<double>();
      audit.scale = need(a, "scale").get<double>();
      audit.skew_before = need(a, "skew_before").get<double>();
      audit.skew_after = need(a, "skew_after").get<double>();
      audit.transform_applied = need(a, "transform_applied").get<bool>();
      audit.dropped = need(a, "dropped").get<bool>();
      rep.preprocessing.push_back(std::move(audit));
    }
    if (j.contains("timing_seconds"))
      rep.timing_seconds = j["timing_seconds"].get<double>();
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("report: ") + e.what());
  }
}

std::string serialize_sim_result(const SimResult& result) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  Json exp;
  exp["n"] = result.design.n;
  exp["p"] = result.design.p;
  exp["column_dist"] = column_dist_name(result.design.column_dist);
  exp["signal_k"] = result.signal.k;
  exp["beta_magnitude"] = result.signal.beta_magnitude;
  exp["family"] = family_name(result.response.family);
  exp["gaussian_sd"] = result.response.gaussian_sd;
  exp["censor_fraction_target"] = result.response.censor_fraction_target;
  exp["replicates"] = result.replicates;
  exp["seed"] = result.design.seed;
  exp["targets"] = result.targets;
  exp["rhos"] = result.rhos;
  j["experiment"] = std::move(exp);
  j["n_failed_total"] = result.n_failed_total;
  j["aggregates"] = Json::array();
  for (const auto& a : result.aggregates) {
    Json row;
    row["target_fp"] = a.target_fp;
    row["rho"] = a.rho;
    row["n_ok"] = a.n_ok;
    row["n_failed"] = a.n_failed;
    row["fp_mean"] = a.fp_mean;
    row["fp_q1"] = a.fp_q1;
    row["fp_median"] = a.fp_median;
    row["fp_q3"] = a.fp_q3;
    row["tp_mean"] = a.tp_mean;
    row["tp_q1"] = a.tp_q1;
    row["tp_median"] = a.tp_median;
    row["tp_q3"] = a.tp_q3;
    j["aggregates"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string sim_cells_csv(const SimResult& result) {
  std::string out = csv_record({"replicate", "rho", "target_fp", "observed_fp",
                                "observed_tp", "lambda_fpc_used", "failed", "error"});
  for (const auto& c : result.cells)
    out += csv_record({std::to_string(c.replicate), num(c.rho), num(c.target_fp),
                       std::to_string(c.observed_fp), std::to_string(c.observed_tp),
                       num(c.lambda_fpc_used), c.failed ? "1" : "0", c.error});
  return out;
}

std::string sim_plot_csv(const SimResult& result) {
  std::string out =
      csv_record({"family", "p", "rho", "target_fp", "fp_mean", "fp_q1", "fp_median",
                  "fp_q3", "tp_mean", "tp_q1", "tp_median", "tp_q3", "n_ok"});
  const std::string family = family_name(result.response.family);
  const std::string p = std::to_string(result.design.p);
  for (const auto& a : result.aggregates)
    out += csv_record({family, p, num(a.rho), num(a.target_fp), num(a.fp_mean),
                       num(a.fp_q1), num(a.fp_median), num(a.fp_q3), num(a.tp_mean),
                       num(a.tp_q1), num(a.tp_median), num(a.tp_q3),
                       std::to_string(a.n_ok)});
  return out;
}

}  // namespace fpc
