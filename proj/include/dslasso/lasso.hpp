#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dslasso/types.hpp"

namespace dslasso {

struct LassoConfig {
  double lambda = 0.0;  // penalty weight on ||beta||_1 in ||y - X beta||^2 + lambda ||beta||_1
  double tol = 1e-7;    // max absolute coefficient change per sweep
  int max_iter = 10000;
  std::optional<std::vector<double>> lambda_grid;  // strictly decreasing when present
  int cv_folds = 10;
  std::uint64_t seed = 0;
};

/// Per-fit diagnostics; objective_per_sweep carries one value per completed
/// coordinate sweep (penalized objective, should be non-increasing).
struct LassoDiagnostics {
  std::vector<double> objective_per_sweep;
  int sweeps = 0;
  bool converged = true;
};

/// sign(z) * max(|z| - t, 0); exact zero below the threshold.
double soft_threshold(double z, double t);

/// Cyclic coordinate descent with exact coordinate minimization. Returns
/// kind = ULE; converged=false (never throws) when max_iter sweeps did not
/// bring the per-sweep change under tol.
EstimatorResult lasso_fit(const RegressionData& data, const LassoConfig& cfg,
                          LassoDiagnostics* diag = nullptr);

/// Same solver started from beta0 (warm start along a lambda path).
EstimatorResult lasso_fit_warm(const RegressionData& data, const LassoConfig& cfg,
                               const VectorXd& beta0, LassoDiagnostics* diag = nullptr);

/// Log-spaced grid from lambda_max = 2 max_j |x_j^T y| down to 1e-3 * lambda_max,
/// strictly decreasing. Throws DegenerateResponse when lambda_max == 0.
std::vector<double> lambda_grid_default(const RegressionData& data, int length);

struct LassoPath {
  std::vector<double> lambdas;
  std::vector<VectorXd> betas;
  std::optional<std::vector<double>> cv_errors;
};

/// Fits the whole (decreasing) grid with warm starts, largest lambda first.
LassoPath lasso_path(const RegressionData& data, const LassoConfig& cfg,
                     const std::vector<double>& lambdas);

/// K-fold cross-validation over cfg.lambda_grid (or the default 20-point
/// grid): returns the grid value minimizing mean out-of-fold squared
/// prediction error, ties broken toward the larger lambda.
double select_lambda_cv(const RegressionData& data, const LassoConfig& cfg);

}  // namespace dslasso
