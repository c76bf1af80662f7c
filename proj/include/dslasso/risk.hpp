#pragma once

#include <optional>
#include <vector>

#include "dslasso/types.hpp"

namespace dslasso {

/// Inputs to the asymptotic bias/risk evaluators under local alternatives.
/// delta and A are derived once at construction:
///   delta = C^-1 H^T (H C^-1 H^T)^-1 xi,
///   A     = C^-1 - C^-1 H^T (H C^-1 H^T)^-1 H C^-1.
struct RiskScenario {
  int p = 0;
  int q = 0;
  double sigma2 = 1.0;
  MatrixXd C;  // p x p SPD
  MatrixXd W;  // p x p symmetric PSD weight
  MatrixXd H;  // q x p, rank q
  VectorXd h;  // q
  VectorXd xi; // q, local-alternative direction
  double alpha = 0.05;
  /// Apply W also on the shrink-term traces of the Stein blocks (which are
  /// printed unweighted); identical to the default when W = I.
  bool weighted_shrink_trace = false;

  // cached
  MatrixXd C_inv;
  MatrixXd A;
  VectorXd delta;

  static RiskScenario make(int p, int q, double sigma2, MatrixXd C, MatrixXd W, MatrixXd H,
                           VectorXd h, VectorXd xi, double alpha);
};

/// Delta^2 = sigma^-2 xi^T (H C^-1 H^T)^-1 xi of the scenario's own xi; both
/// the xi-form and the delta-form are evaluated and cross-checked to 1e-8.
double noncentrality(const RiskScenario& s);

/// The three scalar combinations from the risk formulas, with k = q - 2:
///   z = 2 H_{q+2}(c_a; D2) - H_{q+4}(c_a; D2),  c_a the chi-square(q) upper-alpha value
///   x = 2 E[chi^-2_{q+2}(D2)] - k E[chi^-2_{q+4}(D2)]
///   q = 2 E[(1 - k chi^-2_{q+2})I(chi^2_{q+2} <= k)] - E[(1 - k chi^-2_{q+4})I(chi^2_{q+4} <= k)]
struct RiskAuxiliaries {
  double z = 0.0;
  double x = 0.0;
  double q = 0.0;
};

RiskAuxiliaries risk_auxiliaries(const RiskScenario& s, double delta2);

/// Asymptotic distributional bias, quadratic bias, MSE matrix and quadratic
/// risk of one estimator at a given noncentrality.
struct EstimatorRisk {
  VectorXd bias;        // ADB
  double quadratic_bias = 0.0;  // ADQB = sigma^-2 b^T C b
  MatrixXd mse;         // ADMSE
  double risk = 0.0;    // ADQR
};

struct AsymptoticRisks {
  EstimatorRisk ule, rle, ptle;
  std::optional<EstimatorRisk> ssle, prssle;  // absent when q < 3
};

/// Evaluates the five risk blocks at noncentrality delta2, scaling the
/// scenario's xi direction to reach it. Stein blocks require q >= 3.
AsymptoticRisks asymptotic_risks(const RiskScenario& s, double delta2);

struct RiskTableRow {
  double delta2 = 0.0;
  EstimatorKind kind = EstimatorKind::ULE;
  std::optional<double> alpha;  // set for PTLE rows
  double adb_norm = 0.0;
  double adqb = 0.0;
  double adqr = 0.0;
};

struct RiskTable {
  std::vector<double> delta2_grid;
  std::vector<RiskTableRow> rows;
};

/// Risk curves over an ascending delta2 grid for every estimator, with one
/// PTLE series per alpha in alphas.
RiskTable risk_curves(const RiskScenario& s, const std::vector<double>& delta2_grid,
                      const std::vector<double>& alphas);

/// Built-in reference scenario: p=4, q=3, C = W = I, h = 0, xi = (1,1,1),
/// H = [[1,-1,3,1],[3,2,1,0],[4,-2,0,5]].
RiskScenario reference_scenario(double sigma2 = 1.0, double alpha = 0.15);

}  // namespace dslasso
