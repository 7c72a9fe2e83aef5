#include "fpclasso/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fpclasso/errors.hpp"

namespace fpc {

PreprocessRecord PreprocessRecord::identity(Index p) {
  PreprocessRecord rec;
  rec.columns.resize(static_cast<size_t>(p));
  rec.kept.resize(static_cast<size_t>(p));
  for (Index j = 0; j < p; ++j) rec.kept[static_cast<size_t>(j)] = j;
  return rec;
}

double skewness(const Vector& column) {
  const Index n = column.size();
  const double m = column.mean();
  double m2 = 0.0, m3 = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double d = column[i] - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) throw DegenerateColumn("skewness of a constant column");
  return m3 / std::pow(m2, 1.5);
}

namespace {

double sq_skew_of_log(const Vector& shifted_base, double t) {
  // shifted_base = x - min(x); evaluates skew(log(shifted_base + t))^2.
  const double s = skewness((shifted_base.array() + t).log().matrix());
  return s * s;
}

/// Golden-section minimization on [lo, hi] to absolute tolerance on t.
double golden_min(const Vector& base, double lo, double hi, double tol) {
  constexpr double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = sq_skew_of_log(base, x1);
  double f2 = sq_skew_of_log(base, x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = sq_skew_of_log(base, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = sq_skew_of_log(base, x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::pair<Vector, std::optional<double>> skew_adjust(const Vector& column) {
  const Index n = column.size();
  const double min_x = column.minCoeff();
  const double range = column.maxCoeff() - min_x;
  if (range <= 0.0) throw DegenerateColumn("constant column");

  std::set<double> distinct(column.data(), column.data() + n);
  if (distinct.size() < 3) return {column, std::nullopt};

  const double raw_sq = skewness(column) * skewness(column);
  const Vector base = column.array() - min_x;

  // Coarse log-spaced scan over the shift offset t = c + min(x), then
  // golden-section inside the best coarse cell.
  const double t_lo = 1e-8 * range;
  const double t_hi = 1e6 * range;
  constexpr int kScan = 200;
  const double log_lo = std::log(t_lo), log_hi = std::log(t_hi);
  int best_k = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScan; ++k) {
    const double t = std::exp(log_lo + (log_hi - log_lo) * k / (kScan - 1));
    const double f = sq_skew_of_log(base, t);
    if (f < best_f) {
      best_f = f;
      best_k = k;
    }
  }
  const double bracket_lo =
      std::exp(log_lo + (log_hi - log_lo) * std::max(best_k - 1, 0) / (kScan - 1));
  const double bracket_hi =
      std::exp(log_lo + (log_hi - log_lo) * std::min(best_k + 1, kScan - 1) / (kScan - 1));
  const double t_star = golden_min(base, bracket_lo, bracket_hi, 1e-8);
  const double f_star = sq_skew_of_log(base, t_star);

  if (f_star >= raw_sq) return {column, std::nullopt};
  const double c_star = t_star - min_x;
  return {(base.array() + t_star).log().matrix(), c_star};
}

std::tuple<Vector, double, double> standardize(const Vector& column) {
  const Index n = column.size();
  const double m = column.mean();
  Vector out = column.array() - m;
  const double scale = std::sqrt(out.squaredNorm() / n);
  if (scale <= 0.0) throw DegenerateColumn("constant column");
  out /= scale;
  return {out, m, scale};
}

Matrix preprocess_design(const Matrix& X, PreprocessRecord& record) {
  const Index n = X.rows(), p = X.cols();
  record.columns.assign(static_cast<size_t>(p), ColumnRecord{});
  record.kept.clear();

  std::vector<Vector> cols;
  cols.reserve(static_cast<size_t>(p));
  for (Index j = 0; j < p; ++j) {
    ColumnRecord& rec = record.columns[static_cast<size_t>(j)];
    const Vector raw = X.col(j);
    if (raw.maxCoeff() - raw.minCoeff() <= 0.0) {
      rec.dropped = true;
      continue;
    }
    rec.skew_before = skewness(raw);
    auto [adjusted, shift] = skew_adjust(raw);
    rec.shift = shift;
    rec.transform_applied = shift.has_value();
    rec.skew_after = skewness(adjusted);
    auto [standardized, mean, scale] = standardize(adjusted);
    rec.mean = mean;
    rec.scale = scale;
    record.kept.push_back(j);
    cols.push_back(std::move(standardized));
  }

  Matrix out(n, static_cast<Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = cols[k];
  return out;
}

PcaResult orthogonalize_pca(const Matrix& X) {
  const Index n = X.rows(), p = X.cols();
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const Index full = std::min(n, p);
  const double cutoff = sv.size() > 0 ? sv[0] * 1e-12 * std::max(n, p) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;

  PcaResult res;
  res.rank = rank;
  res.rank_deficient = rank < full;
  res.scores = svd.matrixU().leftCols(rank) * sv.head(rank).asDiagonal();
  res.loadings = svd.matrixV().leftCols(rank);
  return res;
}

}  // namespace fpc
