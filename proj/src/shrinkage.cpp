#include "dslasso/shrinkage.hpp"

#include <cmath>

#include "dslasso/chisq.hpp"
#include "dslasso/model_core.hpp"

namespace dslasso {

const char* to_string(VarianceSource source) {
  return source == VarianceSource::OlsResidual ? "OLS_RESIDUAL" : "LASSO_RESIDUAL";
}

ShrinkageContext ShrinkageContext::make(const GramSummary& g, const Restriction& r,
                                        double alpha, CriticalValueKind kind) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0,1)");
  ShrinkageContext ctx;
  ctx.H = r.H;
  ctx.h = r.h;
  ctx.q = static_cast<int>(r.q());
  ctx.m = g.m;
  ctx.alpha = alpha;
  ctx.critical_kind = kind;

  const MatrixXd CiHt = g.C_inv * r.H.transpose();          // p x q
  const MatrixXd HCiHt = r.H * CiHt;                        // q x q, SPD
  Eigen::LLT<MatrixXd> llt(HCiHt);
  if (llt.info() != Eigen::Success)
    throw SingularDesign("H C^-1 H^T is not positive definite");
  ctx.wald_core = llt.solve(MatrixXd::Identity(ctx.q, ctx.q));
  ctx.correction_kernel = CiHt * ctx.wald_core;

  ctx.k_n = static_cast<double>(g.m) * (ctx.q - 2) / (g.m + 2.0);
  ctx.critical_value = kind == CriticalValueKind::ChiSquare
                           ? chisq_upper_quantile(alpha, ctx.q)
                           : ctx.q * f_upper_quantile(alpha, ctx.q, ctx.m);
  return ctx;
}

EstimatorResult restricted_estimator(const EstimatorResult& base, const ShrinkageContext& ctx) {
  EstimatorResult out;
  switch (base.kind) {
    case EstimatorKind::ULE: out.kind = EstimatorKind::RLE; break;
    case EstimatorKind::OLS: out.kind = EstimatorKind::ROLS; break;
    default: throw InvalidArgument("restricted_estimator needs a ULE or OLS base");
  }
  const VectorXd gap = ctx.H * base.beta - ctx.h;
  out.beta = base.beta - ctx.correction_kernel * gap;
  out.converged = base.converged;
  const double violation = (ctx.H * out.beta - ctx.h).lpNorm<Eigen::Infinity>();
  if (!(violation <= 1e-8))
    throw NumericFailure("restricted estimator violates H beta = h by " +
                         std::to_string(violation));
  return out;
}

TestOutcome wald_statistic(const VectorXd& beta_hat, const ShrinkageContext& ctx, double s2,
                           VarianceSource source) {
  if (!(s2 > 0.0)) throw InvalidArgument("wald_statistic needs s2 > 0");
  const VectorXd gap = ctx.H * beta_hat - ctx.h;
  TestOutcome t;
  t.statistic = gap.dot(ctx.wald_core * gap) / s2;
  t.variance_source = source;
  t.alpha = ctx.alpha;
  t.critical_value = ctx.critical_value;
  t.accepted = t.statistic <= ctx.critical_value;
  return t;
}

EstimatorResult preliminary_test_lasso(const EstimatorResult& base,
                                       const EstimatorResult& restricted,
                                       const TestOutcome& test) {
  EstimatorResult out = test.accepted ? restricted : base;
  out.kind = EstimatorKind::PTLE;
  out.test_stat = test.statistic;
  out.decision = test.accepted;
  out.converged = base.converged;
  return out;
}

namespace {

// Shared Stein expression so the positive-rule branch is bitwise identical.
EstimatorResult stein_core(const EstimatorResult& base, const EstimatorResult& restricted,
                           const TestOutcome& test, const ShrinkageContext& ctx,
                           EstimatorKind kind) {
  EstimatorResult out;
  out.kind = kind;
  out.test_stat = test.statistic;
  out.decision = test.accepted;
  out.converged = base.converged;
  if (test.statistic == 0.0) {
    out.beta = restricted.beta;
    out.degenerate_statistic = true;
    out.shrink_factor = 1.0;
    return out;
  }
  const double factor = ctx.k_n / test.statistic;
  out.beta = base.beta - factor * (base.beta - restricted.beta);
  out.shrink_factor = factor;
  return out;
}

}  // namespace

EstimatorResult stein_shrinkage_lasso(const EstimatorResult& base,
                                      const EstimatorResult& restricted,
                                      const TestOutcome& test, const ShrinkageContext& ctx) {
  if (ctx.q < 3)
    throw QTooSmall("Stein shrinkage needs q >= 3 (got q=" + std::to_string(ctx.q) + ")");
  return stein_core(base, restricted, test, ctx, EstimatorKind::SSLE);
}

EstimatorResult positive_rule_lasso(const EstimatorResult& base,
                                    const EstimatorResult& restricted, const TestOutcome& test,
                                    const ShrinkageContext& ctx) {
  if (ctx.q < 3)
    throw QTooSmall("positive-rule shrinkage needs q >= 3 (got q=" + std::to_string(ctx.q) + ")");
  if (test.statistic <= ctx.k_n) {
    EstimatorResult out;
    out.kind = EstimatorKind::PRSSLE;
    out.beta = restricted.beta;
    out.test_stat = test.statistic;
    out.decision = test.accepted;
    out.shrink_factor = 1.0;
    out.converged = base.converged;
    out.degenerate_statistic = test.statistic == 0.0;
    return out;
  }
  EstimatorResult out = stein_core(base, restricted, test, ctx, EstimatorKind::PRSSLE);
  return out;
}

FitAllResult fit_all(const RegressionData& data, const Restriction& r, const LassoConfig& cfg,
                     double alpha, VarianceSource source, CriticalValueKind critical_kind) {
  FitAllResult out;
  const GramSummary g = gram_summary(data);
  const EstimatorResult ols = ols_fit(data, g);

  LassoConfig c = cfg;
  if (cfg.lambda_grid) c.lambda = select_lambda_cv(data, cfg);
  out.lambda = c.lambda;

  EstimatorResult ule = lasso_fit(data, c);
  if (!ule.converged) out.warnings.push_back("LASSO did not converge within max_iter");

  const ShrinkageContext ctx = ShrinkageContext::make(g, r, alpha, critical_kind);
  EstimatorResult rle = restricted_estimator(ule, ctx);

  double s2;
  VectorXd stat_base;
  if (source == VarianceSource::OlsResidual) {
    s2 = sigma2_ols(data, ols, g.m);
    stat_base = ols.beta;
  } else {
    s2 = sigma2_lasso(data, ule, g.m);
    stat_base = ule.beta;
  }
  out.test = wald_statistic(stat_base, ctx, s2, source);

  ule.test_stat = out.test.statistic;
  rle.test_stat = out.test.statistic;
  rle.decision = out.test.accepted;

  out.estimators.emplace(EstimatorKind::PTLE, preliminary_test_lasso(ule, rle, out.test));
  if (ctx.q >= 3) {
    out.estimators.emplace(EstimatorKind::SSLE,
                           stein_shrinkage_lasso(ule, rle, out.test, ctx));
    out.estimators.emplace(EstimatorKind::PRSSLE,
                           positive_rule_lasso(ule, rle, out.test, ctx));
  } else {
    out.warnings.push_back("q < 3: SSLE/PRSSLE omitted (shrink constant not positive)");
  }
  out.estimators.emplace(EstimatorKind::ULE, std::move(ule));
  out.estimators.emplace(EstimatorKind::RLE, std::move(rle));
  return out;
}

}  // namespace dslasso
