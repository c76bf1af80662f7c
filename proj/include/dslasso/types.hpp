#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dslasso/errors.hpp"

namespace dslasso {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class EstimatorKind { ULE, RLE, PTLE, SSLE, PRSSLE, OLS, ROLS };

const char* to_string(EstimatorKind kind);

/// Design matrix plus response. Immutable after construction; all operations
/// downstream are pure functions of it.
struct RegressionData {
  MatrixXd X;  // n x p
  VectorXd y;  // n
  bool centered = false;
  VectorXd column_means;                  // p, set when centered
  std::vector<std::string> column_names;  // optional (CSV ingestion)
  std::string response_name;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }

  /// Validates n > p >= 1 and that X, y are finite.
  static RegressionData make(MatrixXd X, VectorXd y);
};

/// Gram matrix C = X^T X with its cached inverse and residual degrees of
/// freedom m = n - p. The inverse is computed once and reused by every
/// downstream estimator.
struct GramSummary {
  MatrixXd C;
  MatrixXd C_inv;
  int m = 0;
};

/// Linear subspace hypothesis H beta = h with rank(H) = q.
struct Restriction {
  MatrixXd H;  // q x p
  VectorXd h;  // q

  Eigen::Index q() const { return H.rows(); }

  /// Validates 1 <= q <= p and rank(H) = q (rank-revealing QR, tolerance
  /// 1e-10 * ||H||).
  static Restriction make(MatrixXd H, VectorXd h);
};

/// Coefficient vector tagged with its estimator kind and the diagnostics of
/// the decision that produced it.
struct EstimatorResult {
  VectorXd beta;
  EstimatorKind kind = EstimatorKind::ULE;
  std::optional<double> test_stat;
  std::optional<bool> decision;  // true = null accepted
  std::optional<double> shrink_factor;
  bool converged = true;              // false if coordinate descent was cut off
  bool degenerate_statistic = false;  // Stein member built at L_n == 0
};

}  // namespace dslasso
