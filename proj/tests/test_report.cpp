#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fpclasso/errors.hpp"
#include "fpclasso/fpc.hpp"
#include "fpclasso/report.hpp"
#include "fpclasso/rng.hpp"
#include "fpclasso/simlab.hpp"
#include "test_util.hpp"

using namespace fpc;

namespace {

FitReport sample_report() {
  FitReport r;
  r.tool = "fpclasso";
  r.version = "0.1.0";
  r.family = "gaussian";
  r.seed = 18446744073709551615ull;  // max u64 must survive the round trip
  r.lambda_fpc = 1.7316643890021564;
  r.lambda_classical = 16.67376100000123;
  r.fp_bound = 1.0000000152214366;
  r.post_hoc_fdr = 1.0 / 3.0;
  r.target_above_max = false;
  r.intercept = 0.10949880931699804;
  r.intercept_original = -68.86365910659872;
  r.active = {{"x1", 0, 1.2448968086809014, 1.1838654320902966},
              {"x3", 2, -0.7658858835465626, -21.33535759058748}};
  r.regularity_monotone = true;
  r.regularity_violations = 0;
  r.regularity_max_violation = 0.0;
  ColumnAudit a;
  a.name = "x1";
  a.mean = -0.062313067941175;
  a.scale = 1.0515526300002227;
  a.skew_before = -0.14181990682797593;
  a.skew_after = a.skew_before;
  ColumnAudit b;
  b.name = "x2";
  b.shift = 25.199624010287717;
  b.mean = 3.2257727646971355;
  b.scale = 0.035897494583566225;
  b.skew_before = 0.12211344152592417;
  b.skew_after = 6.59466316565837e-12;
  b.transform_applied = true;
  ColumnAudit c;
  c.name = "x3";
  c.dropped = true;
  r.preprocessing = {a, b, c};
  return r;
}

}  // namespace

TEST_CASE("fit report json round-trips losslessly") {
  const FitReport r = sample_report();
  CHECK(parse_fit_report(serialize_fit_report(r)) == r);

  FitReport timed = r;
  timed.timing_seconds = 0.0123456789012345;
  CHECK(parse_fit_report(serialize_fit_report(timed)) == timed);
  // and the two variants do not compare equal
  CHECK_FALSE(parse_fit_report(serialize_fit_report(timed)) == r);
}

TEST_CASE("fit report serialization is stable and self-identifying") {
  const std::string text = serialize_fit_report(sample_report());
  CHECK(text.find("\"tool\": \"fpclasso\"") != std::string::npos);
  CHECK(text.find("\"version\": \"0.1.0\"") != std::string::npos);
  CHECK(text.find("\"fp_bound\"") != std::string::npos);
  CHECK(text.find("\"post_hoc_fdr\"") != std::string::npos);
  CHECK(text.find("\"timing_seconds\"") == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("parse_fit_report rejects missing fields and junk") {
  CHECK_THROWS_AS(parse_fit_report("not json"), MalformedInput);
  CHECK_THROWS_AS(parse_fit_report("{}"), MalformedInput);
  std::string text = serialize_fit_report(sample_report());
  const auto pos = text.find("\"fp_bound\"");
  text.erase(pos, text.find(',', pos) - pos + 1);
  CHECK_THROWS_AS(parse_fit_report(text), MalformedInput);
}

TEST_CASE("originalize_coefficients inverts centering and scaling") {
  PreprocessRecord rec;
  rec.columns.resize(3);
  rec.columns[0].mean = 2.0;
  rec.columns[0].scale = 4.0;
  rec.columns[1].dropped = true;
  rec.columns[2].mean = -1.0;
  rec.columns[2].scale = 0.5;
  rec.kept = {0, 2};

  Coefficients coef;
  coef.intercept = 3.0;
  coef.beta = Vector(2);
  coef.beta << 8.0, 1.0;

  const auto [b0, orig] = originalize_coefficients(coef, rec);
  CHECK(orig[0] == 2.0);          // 8 / 4
  CHECK(orig[1] == 2.0);          // 1 / 0.5
  CHECK(b0 == 3.0 - 8.0 * 2.0 / 4.0 - 1.0 * (-1.0) / 0.5);

  Coefficients wrong;
  wrong.intercept = 0.0;
  wrong.beta = Vector::Zero(3);
  CHECK_THROWS_AS(originalize_coefficients(wrong, rec), OutOfRange);
}

// The report's original-scale coefficients must reproduce the standardized
// model's predictions when applied to the raw table (after each column's
// log shift, where one was chosen).
TEST_CASE("original-scale coefficients predict identically on raw inputs") {
  Rng rng = make_rng(314);
  const Index n = 120, p = 8;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  Matrix X(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j)
      X(i, j) = (j % 3 == 1) ? expo(rng) : gauss(rng);
    X(i, 5) = 7.0;  // constant, dropped by preprocessing
  }
  Vector y(n);
  for (Index i = 0; i < n; ++i)
    y[i] = 1.4 * X(i, 0) - 0.9 * X(i, 1) + gauss(rng);

  Dataset data;
  data.X = X;
  data.y = y;
  const FpcSolution sol =
      solve_fpc(data, Family::Gaussian, FpcTarget::fp(2.0), PathConfig{});
  REQUIRE_FALSE(sol.active_set.empty());

  std::vector<std::string> names;
  for (Index j = 0; j < p; ++j) names.push_back("c" + std::to_string(j));
  const FitReport rep =
      build_fit_report(sol, RegularityDiagnostic{}, Family::Gaussian, names, 0);

  // dropped column is audited but can never appear among the active features
  CHECK(rep.preprocessing[5].dropped);
  for (const auto& f : rep.active) CHECK(f.name != "c5");

  PreprocessRecord rec;
  const Matrix Xs = preprocess_design(X, rec);
  for (Index i = 0; i < n; ++i) {
    double eta_std = rep.intercept;
    for (const auto& f : rep.active) eta_std += f.coef * Xs(i, f.index);
    double eta_raw = rep.intercept_original;
    for (const auto& f : rep.active) {
      const Index orig = rec.kept[static_cast<std::size_t>(f.index)];
      const ColumnRecord& col = rec.columns[static_cast<std::size_t>(orig)];
      const double t = col.shift ? std::log(X(i, orig) + *col.shift) : X(i, orig);
      eta_raw += f.coef_original * t;
    }
    CHECK(std::abs(eta_std - eta_raw) < 1e-8);
  }
}

TEST_CASE("active feature names skip dropped columns") {
  // One kept, one dropped, one kept: index 1 of the fitted design must map
  // to the third original name.
  PreprocessRecord rec;
  rec.columns.resize(3);
  rec.columns[1].dropped = true;
  rec.kept = {0, 2};

  FpcSolution sol;
  sol.coef.intercept = 0.0;
  sol.coef.beta = Vector(2);
  sol.coef.beta << 0.0, 1.5;
  sol.active_set = {1};
  sol.preprocessing = rec;

  const FitReport rep = build_fit_report(sol, RegularityDiagnostic{},
                                         Family::Gaussian, {"a", "b", "c"}, 9);
  REQUIRE(rep.active.size() == 1);
  CHECK(rep.active[0].name == "c");
  CHECK(rep.active[0].index == 1);
  CHECK(rep.seed == 9);

  CHECK_THROWS_AS(build_fit_report(sol, RegularityDiagnostic{}, Family::Gaussian,
                                   {"a", "b"}, 9),
                  OutOfRange);
}

TEST_CASE("simulation serializers carry every cell and aggregate") {
  DesignSpec design;
  design.n = 50;
  design.p = 20;
  design.seed = 5;
  SignalSpec signal;
  signal.k = 2;
  signal.beta_magnitude = 1.5;
  ResponseSpec resp;
  PathConfig config;
  config.n_lambda = 40;
  const SimResult res =
      run_fp_experiment(design, signal, resp, {1.0, 4.0}, 6, config);

  const std::string json = serialize_sim_result(res);
  CHECK(json.find("\"tool\": \"fpclasso\"") != std::string::npos);
  CHECK(json.find("\"aggregates\"") != std::string::npos);
  CHECK(json.find("\"n_failed_total\": 0") != std::string::npos);

  const std::string cells = sim_cells_csv(res);
  const std::string plot = sim_plot_csv(res);
  const auto count_lines = [](const std::string& s) {
    std::size_t k = 0;
    for (char c : s) k += c == '\n';
    return k;
  };
  CHECK(count_lines(cells) == 1 + res.cells.size());
  CHECK(count_lines(plot) == 1 + res.aggregates.size());
  CHECK(cells.rfind("replicate,rho,target_fp,", 0) == 0);
  CHECK(plot.rfind("family,p,rho,target_fp,", 0) == 0);
  CHECK(plot.find("gaussian,20,") != std::string::npos);
}
