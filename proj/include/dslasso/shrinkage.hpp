#pragma once

#include <map>
#include <string>
#include <vector>

#include "dslasso/lasso.hpp"
#include "dslasso/types.hpp"

namespace dslasso {

enum class VarianceSource { OlsResidual, LassoResidual };

const char* to_string(VarianceSource source);

/// Critical value for the Wald test: asymptotic chi-square(q) by default, or
/// the small-sample variant that compares L_n / q against an F(q, m) quantile.
enum class CriticalValueKind { ChiSquare, FSmallSample };

/// Everything the improved estimators need from (C_n, H, h, alpha), built
/// once and shared: the correction kernel C^-1 H^T (H C^-1 H^T)^-1, the Wald
/// core (H C^-1 H^T)^-1, the shrink constant k_n = m(q-2)/(m+2), and the
/// critical value of the level-alpha test.
struct ShrinkageContext {
  MatrixXd H;
  VectorXd h;
  MatrixXd correction_kernel;  // p x q
  MatrixXd wald_core;          // q x q
  double k_n = 0.0;
  double alpha = 0.0;
  double critical_value = 0.0;
  CriticalValueKind critical_kind = CriticalValueKind::ChiSquare;
  int q = 0;
  int m = 0;

  static ShrinkageContext make(const GramSummary& g, const Restriction& r, double alpha,
                               CriticalValueKind kind = CriticalValueKind::ChiSquare);
};

struct TestOutcome {
  double statistic = 0.0;
  VarianceSource variance_source = VarianceSource::OlsResidual;
  bool accepted = false;  // statistic <= critical value (ties accept)
  double alpha = 0.0;
  double critical_value = 0.0;
};

/// base - C^-1 H^T (H C^-1 H^T)^-1 (H base - h); the result satisfies
/// H beta = h to numerical precision. ULE -> RLE, OLS -> ROLS.
EstimatorResult restricted_estimator(const EstimatorResult& base, const ShrinkageContext& ctx);

/// Wald statistic (H b - h)^T (H C^-1 H^T)^-1 (H b - h) / s2 and the
/// accept/reject decision at ctx's critical value.
TestOutcome wald_statistic(const VectorXd& beta_hat, const ShrinkageContext& ctx, double s2,
                           VarianceSource source = VarianceSource::OlsResidual);

/// Picks restricted on acceptance, base on rejection; the output coefficient
/// vector is a verbatim copy of the chosen input.
EstimatorResult preliminary_test_lasso(const EstimatorResult& base,
                                       const EstimatorResult& restricted,
                                       const TestOutcome& test);

/// base - k_n (base - restricted) / L_n. Throws QTooSmall for q < 3; a zero
/// statistic returns the restricted vector flagged degenerate.
EstimatorResult stein_shrinkage_lasso(const EstimatorResult& base,
                                      const EstimatorResult& restricted,
                                      const TestOutcome& test, const ShrinkageContext& ctx);

/// Positive-rule variant: restricted exactly when L_n <= k_n, otherwise the
/// identical Stein expression (bitwise equal to stein_shrinkage_lasso there).
EstimatorResult positive_rule_lasso(const EstimatorResult& base,
                                    const EstimatorResult& restricted, const TestOutcome& test,
                                    const ShrinkageContext& ctx);

struct FitAllResult {
  std::map<EstimatorKind, EstimatorResult> estimators;
  std::vector<std::string> warnings;
  double lambda = 0.0;  // lambda actually used for the LASSO base
  TestOutcome test;
};

/// Orchestrates ULE, RLE, PTLE, SSLE, PRSSLE on one dataset. The Stein
/// members are omitted (with a warning) when q < 3. If cfg.lambda_grid is
/// present, lambda is chosen by cross-validation first.
FitAllResult fit_all(const RegressionData& data, const Restriction& r, const LassoConfig& cfg,
                     double alpha, VarianceSource source = VarianceSource::OlsResidual,
                     CriticalValueKind critical_kind = CriticalValueKind::ChiSquare);

}  // namespace dslasso
