#include "dslasso/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "dslasso/rng.hpp"

namespace dslasso {

double soft_threshold(double z, double t) {
  if (t < 0.0) throw InvalidArgument("soft_threshold needs t >= 0");
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace {

EstimatorResult coordinate_descent(const RegressionData& data, const LassoConfig& cfg,
                                   VectorXd beta, LassoDiagnostics* diag) {
  if (cfg.lambda < 0.0) throw InvalidArgument("lambda must be >= 0");
  if (cfg.tol <= 0.0) throw InvalidArgument("tol must be > 0");
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const VectorXd col_sq = data.X.colwise().squaredNorm();

  VectorXd resid = data.y - data.X * beta;
  const double half_lambda = 0.5 * cfg.lambda;

  if (diag) {
    diag->objective_per_sweep.clear();
    diag->sweeps = 0;
  }

  bool converged = false;
  int sweep = 0;
  for (; sweep < cfg.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) <= 0.0) continue;  // all-zero column stays at 0
      const double old = beta(j);
      // partial residual correlation: x_j^T r + ||x_j||^2 beta_j
      const double zj = data.X.col(j).dot(resid) + col_sq(j) * old;
      const double nu = soft_threshold(zj, half_lambda) / col_sq(j);
      if (nu != old) {
        resid += data.X.col(j) * (old - nu);
        beta(j) = nu;
        max_change = std::max(max_change, std::abs(nu - old));
      }
    }
    if (diag) {
      diag->objective_per_sweep.push_back(resid.squaredNorm() +
                                          cfg.lambda * beta.lpNorm<1>());
      diag->sweeps = sweep + 1;
    }
    if (max_change < cfg.tol) {
      converged = true;
      break;
    }
  }
  (void)n;

  EstimatorResult out;
  out.kind = EstimatorKind::ULE;
  out.beta = std::move(beta);
  out.converged = converged;
  if (diag) diag->converged = converged;
  return out;
}

}  // namespace

EstimatorResult lasso_fit(const RegressionData& data, const LassoConfig& cfg,
                          LassoDiagnostics* diag) {
  return coordinate_descent(data, cfg, VectorXd::Zero(data.p()), diag);
}

EstimatorResult lasso_fit_warm(const RegressionData& data, const LassoConfig& cfg,
                               const VectorXd& beta0, LassoDiagnostics* diag) {
  if (beta0.size() != data.p()) throw InvalidArgument("warm start has wrong length");
  return coordinate_descent(data, cfg, beta0, diag);
}

std::vector<double> lambda_grid_default(const RegressionData& data, int length) {
  if (length < 2) throw InvalidArgument("grid length must be >= 2");
  // column-wise dots reproduce the solver's correlation arithmetic bitwise,
  // so a fit at the grid head lands on the exact zero vector
  double max_corr = 0.0;
  for (Eigen::Index j = 0; j < data.p(); ++j)
    max_corr = std::max(max_corr, std::abs(data.X.col(j).dot(data.y)));
  const double lambda_max = 2.0 * max_corr;
  if (lambda_max <= 0.0)
    throw DegenerateResponse("y is orthogonal to every column; lambda grid would be all zeros");
  const double lambda_min = 1e-3 * lambda_max;
  std::vector<double> grid(length);
  const double log_hi = std::log(lambda_max);
  const double log_lo = std::log(lambda_min);
  for (int i = 0; i < length; ++i)
    grid[i] = std::exp(log_hi + (log_lo - log_hi) * i / (length - 1));
  grid.front() = lambda_max;
  grid.back() = lambda_min;
  return grid;
}

LassoPath lasso_path(const RegressionData& data, const LassoConfig& cfg,
                     const std::vector<double>& lambdas) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1]))
      throw InvalidArgument("lambda grid must be strictly decreasing");
  LassoPath path;
  path.lambdas = lambdas;
  path.betas.reserve(lambdas.size());
  VectorXd warm = VectorXd::Zero(data.p());
  for (double lam : lambdas) {
    LassoConfig c = cfg;
    c.lambda = lam;
    EstimatorResult fit = lasso_fit_warm(data, c, warm);
    warm = fit.beta;
    path.betas.push_back(std::move(fit.beta));
  }
  return path;
}

double select_lambda_cv(const RegressionData& data, const LassoConfig& cfg) {
  if (cfg.cv_folds < 2) throw InvalidArgument("cv needs at least 2 folds");
  const std::vector<double> grid =
      cfg.lambda_grid ? *cfg.lambda_grid : lambda_grid_default(data, 20);
  if (grid.empty()) throw InvalidArgument("empty lambda grid");
  if (grid.size() == 1) return grid.front();

  const Eigen::Index n = data.n();
  const int folds = std::min<int>(cfg.cv_folds, static_cast<int>(n));

  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  Rng rng(cfg.seed);
  rng.shuffle(order);
  std::vector<int> fold_of(n);
  for (Eigen::Index i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % folds);

  std::vector<double> sse(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
    if (train.size() <= static_cast<std::size_t>(data.p())) continue;  // fold too small to fit

    MatrixXd Xtr(train.size(), data.p()), Xte(test.size(), data.p());
    VectorXd ytr(train.size()), yte(test.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      Xtr.row(i) = data.X.row(train[i]);
      ytr(i) = data.y(train[i]);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      Xte.row(i) = data.X.row(test[i]);
      yte(i) = data.y(test[i]);
    }
    RegressionData dtr = RegressionData::make(std::move(Xtr), std::move(ytr));
    LassoPath path = lasso_path(dtr, cfg, grid);
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
      sse[gi] += (yte - Xte * path.betas[gi]).squaredNorm();
  }

  // grid is decreasing; strict < keeps the largest lambda on ties
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi)
    if (sse[gi] < sse[best]) best = gi;
  return grid[best];
}

}  // namespace dslasso
