#pragma once

#include <Eigen/Dense>
#include <string>

namespace fpc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

enum class Family { Gaussian, Logistic, Poisson, CoxPH };

const char* family_name(Family f);

/// Parses "gaussian" / "logistic" / "poisson" / "cox"; throws OutOfRange otherwise.
Family parse_family(const std::string& name);

/// Design matrix plus typed response.
///
/// For Gaussian/Logistic/Poisson the response lives in `y`.  For CoxPH,
/// `y` holds the observed times (all > 0) and `event` the 0/1 indicators.
struct Dataset {
  Matrix X;
  Vector y;
  IntVector event;  // CoxPH only; size 0 otherwise

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
};

/// Checks the Dataset invariants for the given family; throws on violation.
void validate_dataset(const Dataset& data, Family family);

struct Coefficients {
  double intercept = 0.0;
  Vector beta;
};

}  // namespace fpc
