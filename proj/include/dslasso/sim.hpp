#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dslasso/shrinkage.hpp"
#include "dslasso/types.hpp"

namespace dslasso {

enum class LambdaMode { CV, FixedSqrtN };

const char* to_string(LambdaMode mode);

/// Monte Carlo relative-efficiency experiment: equicorrelated Gaussian
/// designs, sparse truth with the trailing block scaled to a target
/// noncentrality, all five estimators refit per replicate.
struct SimDesign {
  int n = 100;
  std::vector<int> p_list{10, 20, 30};
  int k_nonzero = 1;  // leading ones; trailing p-k block carries the violation
  std::vector<double> r_list{0.0, 0.2, 0.9};
  std::vector<double> delta2_list{0, 1, 2, 3, 5, 10, 20, 30, 50};
  int reps = 2000;
  double sigma_eps = 5.0;
  std::vector<double> alpha_list{0.15, 0.20, 0.25};
  std::uint64_t seed = 0;
  LambdaMode lambda_mode = LambdaMode::FixedSqrtN;
  double lambda_c = 0.5;  // lambda = lambda_c * sqrt(n) in FixedSqrtN mode
  VarianceSource variance_source = VarianceSource::OlsResidual;
};

/// n x p matrix with i.i.d. N_p(0, Sigma) rows, Sigma equicorrelated with
/// off-diagonal r, generated through the Cholesky factor of Sigma.
/// Deterministic given the seed.
MatrixXd gen_design(int n, int p, double r, std::uint64_t seed);

/// Truth vector and restriction for one cell: beta = (1,...,1, tau/sqrt(q') * 1)
/// with H = [0 | I_{q'}], h = 0, and tau solved so the population
/// noncentrality n sigma^-2 (H beta)^T (H Sigma^-1 H^T)^-1 (H beta) equals
/// delta2_target. delta2_target = 0 leaves the trailing block exactly zero.
std::pair<VectorXd, Restriction> beta_for_delta2(int p, int k_nonzero, double delta2_target,
                                                 double r, double sigma2, int n);

struct CellEstimate {
  EstimatorKind kind = EstimatorKind::ULE;
  std::optional<double> alpha;  // PTLE rows only
  double risk = 0.0;            // mean ||beta_hat - beta||^2
  double rel_eff = 0.0;         // risk(ULE) / risk
  double mc_se = 0.0;           // delta-method standard error of the ratio
};

struct CellResult {
  int p = 0;
  int k = 0;
  double r = 0.0;
  double delta2 = 0.0;
  std::vector<CellEstimate> estimates;
  int failures = 0;
  int reps_used = 0;
};

/// One (p, r, delta2) cell of the experiment. cell_index feeds the
/// per-replicate RNG streams; failures above 1% of reps abort the cell.
CellResult run_cell(const SimDesign& design, int p, double r, double delta2,
                    std::uint64_t cell_index, int threads);

struct EfficiencyTable {
  SimDesign design;
  std::vector<CellResult> cells;
};

/// Full sweep over p_list x r_list x delta2_list. Deterministic given the
/// design seed, independent of thread count.
EfficiencyTable run_experiment(const SimDesign& design, int threads);

/// CSV with columns p,k,r,delta2,estimator,alpha,rel_eff,mc_se (full precision).
std::string efficiency_csv(const EfficiencyTable& table);

/// Human-readable table: one block per (p, r), estimator columns, one row per delta2.
std::string efficiency_text(const EfficiencyTable& table);

}  // namespace dslasso
