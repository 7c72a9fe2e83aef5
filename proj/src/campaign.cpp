#include "fpclasso/campaign.hpp"

#include <set>
#include <string>

#include "fpclasso/errors.hpp"
#include "json.hpp"

namespace fpc {

namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw MalformedInput("config: " + path + ": " + message);
}

void reject_unknown(const Json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (allowed.find(item.key()) == allowed.end())
      fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

const Json* find(const Json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

Json::number_integer_t get_int(const Json& obj, const std::string& path,
                               const std::string& key, long min_value) {
  const Json* v = find(obj, key);
  if (!v) fail(path + "." + key, "required integer is missing");
  if (!v->is_number_integer()) fail(path + "." + key, "must be an integer");
  const auto value = v->get<Json::number_integer_t>();
  if (value < min_value)
    fail(path + "." + key, "must be at least " + std::to_string(min_value));
  return value;
}

double get_num(const Json& obj, const std::string& path, const std::string& key,
               double fallback) {
  const Json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(path + "." + key, "must be a number");
  return v->get<double>();
}

std::string get_str(const Json& obj, const std::string& path,
                    const std::string& key, const std::string& fallback) {
  const Json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(path + "." + key, "must be a string");
  return v->get<std::string>();
}

std::vector<double> get_num_list(const Json& obj, const std::string& path,
                                 const std::string& key) {
  const Json* v = find(obj, key);
  if (!v) fail(path.empty() ? key : path + "." + key, "required array is missing");
  if (!v->is_array() || v->empty())
    fail(path.empty() ? key : path + "." + key, "must be a non-empty array");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number())
      fail(path.empty() ? key : path + "." + key, "entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Campaign parse_campaign(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw MalformedInput("config: top level must be an object");

  reject_unknown(j, "", {"experiment", "design", "signal", "response", "targets",
                         "rho_list", "target_fp", "replicates", "seed", "path"});

  Campaign c;
  c.experiment = get_str(j, "", "experiment", "");
  if (c.experiment != "fp" && c.experiment != "corr" && c.experiment != "tp")
    fail("experiment", "must be one of fp, corr, tp");

  const Json* design = find(j, "design");
  if (!design || !design->is_object()) fail("design", "required object is missing");
  reject_unknown(*design, "design", {"n", "p", "column_dist", "noise_corr"});
  c.design.n = get_int(*design, "design", "n", 2);
  c.design.p = get_int(*design, "design", "p", 1);
  try {
    c.design.column_dist =
        parse_column_dist(get_str(*design, "design", "column_dist", "gaussian"));
  } catch (const OutOfRange& e) {
    fail("design.column_dist", e.what());
  }
  c.design.noise_corr = get_num(*design, "design", "noise_corr", 0.0);
  if (!(c.design.noise_corr >= 0.0 && c.design.noise_corr < 1.0))
    fail("design.noise_corr", "must lie in [0, 1)");

  const Json* signal = find(j, "signal");
  if (!signal || !signal->is_object()) fail("signal", "required object is missing");
  reject_unknown(*signal, "signal", {"k", "beta_magnitude"});
  c.signal.k = get_int(*signal, "signal", "k", 0);
  c.signal.beta_magnitude = get_num(*signal, "signal", "beta_magnitude", 1.0);
  if (c.signal.k > c.design.p) fail("signal.k", "must not exceed design.p");
  if (c.signal.k >= c.design.n) fail("signal.k", "must be below design.n");

  if (const Json* resp = find(j, "response")) {
    if (!resp->is_object()) fail("response", "must be an object");
    reject_unknown(*resp, "response",
                   {"family", "gaussian_sd", "censor_fraction_target"});
    try {
      c.response.family = parse_family(get_str(*resp, "response", "family", "gaussian"));
    } catch (const Error& e) {
      fail("response.family", e.what());
    }
    c.response.gaussian_sd = get_num(*resp, "response", "gaussian_sd", 1.0);
    if (!(c.response.gaussian_sd >= 0.0)) fail("response.gaussian_sd", "must be >= 0");
    c.response.censor_fraction_target =
        get_num(*resp, "response", "censor_fraction_target", 0.25);
    if (!(c.response.censor_fraction_target >= 0.0 &&
          c.response.censor_fraction_target < 1.0))
      fail("response.censor_fraction_target", "must lie in [0, 1)");
  }

  c.replicates = get_int(j, "", "replicates", 1);
  if (find(j, "seed"))
    c.design.seed = static_cast<std::uint64_t>(get_int(j, "", "seed", 0));

  const double two_p = 2.0 * static_cast<double>(c.design.p);
  if (c.experiment == "corr") {
    c.rho_list = get_num_list(j, "", "rho_list");
    for (double r : c.rho_list)
      if (!(r >= 0.0 && r < 1.0)) fail("rho_list", "entries must lie in [0, 1)");
    const Json* t = find(j, "target_fp");
    if (!t || !t->is_number()) fail("target_fp", "required number is missing");
    c.target_fp = t->get<double>();
    if (!(c.target_fp > 0.0 && c.target_fp < two_p))
      fail("target_fp", "must lie strictly between 0 and 2p");
    if (find(j, "targets")) fail("targets", "not used by the corr experiment");
  } else {
    c.targets = get_num_list(j, "", "targets");
    for (double t : c.targets)
      if (!(t > 0.0 && t < two_p))
        fail("targets", "entries must lie strictly between 0 and 2p");
    if (find(j, "rho_list")) fail("rho_list", "only used by the corr experiment");
    if (find(j, "target_fp")) fail("target_fp", "only used by the corr experiment");
  }

  if (const Json* path = find(j, "path")) {
    if (!path->is_object()) fail("path", "must be an object");
    reject_unknown(*path, "path", {"n_lambda", "min_ratio", "tol", "max_iter"});
    if (find(*path, "n_lambda"))
      c.path.n_lambda = static_cast<int>(get_int(*path, "path", "n_lambda", 2));
    c.path.min_ratio = get_num(*path, "path", "min_ratio", c.path.min_ratio);
    if (!(c.path.min_ratio > 0.0 && c.path.min_ratio < 1.0))
      fail("path.min_ratio", "must lie in (0, 1)");
    c.path.tol = get_num(*path, "path", "tol", c.path.tol);
    if (!(c.path.tol > 0.0)) fail("path.tol", "must be positive");
    if (find(*path, "max_iter"))
      c.path.max_iter = get_int(*path, "path", "max_iter", 1);
  }

  return c;
}

SimResult run_campaign(const Campaign& campaign, int threads) {
  if (campaign.experiment == "fp")
    return run_fp_experiment(campaign.design, campaign.signal, campaign.response,
                             campaign.targets, campaign.replicates, campaign.path,
                             threads);
  if (campaign.experiment == "corr")
    return run_corr_experiment(campaign.design, campaign.signal, campaign.response,
                               campaign.rho_list, campaign.target_fp,
                               campaign.replicates, campaign.path, threads);
  if (campaign.experiment == "tp")
    return run_tp_experiment(campaign.design, campaign.signal, campaign.response,
                             campaign.targets, campaign.replicates, campaign.path,
                             threads);
  throw MalformedInput("config: experiment: must be one of fp, corr, tp");
}

}  // namespace fpc
