#pragma once

#include "dslasso/types.hpp"

namespace dslasso {

/// C = X^T X, its inverse (SPD factorization, cached), and m = n - p.
/// Throws SingularDesign when the smallest eigenvalue of C is not above
/// 1e-10 times the largest.
GramSummary gram_summary(const RegressionData& data);

/// Least-squares fit through the cached Gram inverse. kind = OLS.
EstimatorResult ols_fit(const RegressionData& data, const GramSummary& g);

/// s_e^2 = RSS / m for an OLS fit.
double sigma2_ols(const RegressionData& data, const EstimatorResult& fit, int m);

/// s_L^2 = LASSO RSS / m, m = n - p.
double sigma2_lasso(const RegressionData& data, const EstimatorResult& lasso_fit, int m);

/// Subtracts each predictor column's mean, storing the means for
/// prediction-time reconstruction. The response is left as-is unless
/// center_response is set.
RegressionData center_columns(const RegressionData& data, bool center_response = false);

}  // namespace dslasso
