#include "dslasso/sim.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dslasso/chisq.hpp"
#include "dslasso/csv.hpp"
#include "dslasso/model_core.hpp"
#include "dslasso/parallel.hpp"
#include "dslasso/rng.hpp"

namespace dslasso {

const char* to_string(LambdaMode mode) {
  return mode == LambdaMode::CV ? "CV" : "FIXED_SQRT_N";
}

namespace {

MatrixXd equicorrelation(int p, double r) {
  MatrixXd sigma = MatrixXd::Constant(p, p, r);
  sigma.diagonal().setOnes();
  return sigma;
}

MatrixXd draw_design(int n, int p, const MatrixXd& chol_lower, Rng& rng) {
  MatrixXd Z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) Z(i, j) = rng.normal();
  return Z * chol_lower.transpose();
}

struct CellLayout {
  std::vector<EstimatorKind> kinds;
  std::vector<std::optional<double>> alphas;
};

CellLayout cell_layout(const SimDesign& d) {
  CellLayout lay;
  lay.kinds = {EstimatorKind::ULE, EstimatorKind::RLE};
  lay.alphas = {std::nullopt, std::nullopt};
  for (double a : d.alpha_list) {
    lay.kinds.push_back(EstimatorKind::PTLE);
    lay.alphas.push_back(a);
  }
  lay.kinds.push_back(EstimatorKind::SSLE);
  lay.alphas.push_back(std::nullopt);
  lay.kinds.push_back(EstimatorKind::PRSSLE);
  lay.alphas.push_back(std::nullopt);
  return lay;
}

// delta-method standard error of mean(a)/mean(b) from paired samples
double ratio_se(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double va = 0.0, vb = 0.0, cab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    cab += (a[i] - ma) * (b[i] - mb);
  }
  va /= (n - 1);
  vb /= (n - 1);
  cab /= (n - 1);
  const double ratio = ma / mb;
  const double rel_var = va / (ma * ma) + vb / (mb * mb) - 2.0 * cab / (ma * mb);
  return std::abs(ratio) * std::sqrt(std::max(rel_var, 0.0) / n);
}

}  // namespace

MatrixXd gen_design(int n, int p, double r, std::uint64_t seed) {
  if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("equicorrelation r must be in [0,1)");
  if (n < 1 || p < 1) throw InvalidArgument("need n, p >= 1");
  const MatrixXd L = equicorrelation(p, r).llt().matrixL();
  Rng rng(seed);
  return draw_design(n, p, L, rng);
}

std::pair<VectorXd, Restriction> beta_for_delta2(int p, int k_nonzero, double delta2_target,
                                                 double r, double sigma2, int n) {
  const int qp = p - k_nonzero;
  if (qp < 1) throw InvalidArgument("need at least one zero coefficient (k_nonzero < p)");
  if (delta2_target < 0.0) throw InvalidArgument("delta2 target must be >= 0");

  MatrixXd H = MatrixXd::Zero(qp, p);
  H.rightCols(qp).setIdentity();
  Restriction restr = Restriction::make(H, VectorXd::Zero(qp));

  VectorXd beta = VectorXd::Zero(p);
  beta.head(k_nonzero).setOnes();
  if (delta2_target > 0.0) {
    // population noncentrality: n sigma^-2 v^T (H Sigma^-1 H^T)^-1 v = delta2
    const MatrixXd sigma = equicorrelation(p, r);
    const MatrixXd sigma_inv = sigma.llt().solve(MatrixXd::Identity(p, p));
    const MatrixXd B = H * sigma_inv * H.transpose();
    const VectorXd a = VectorXd::Constant(qp, 1.0 / std::sqrt(static_cast<double>(qp)));
    const double quad = a.dot(B.llt().solve(a));
    const double tau = std::sqrt(delta2_target * sigma2 / (n * quad));
    beta.tail(qp) = tau * a;
  }
  return {beta, std::move(restr)};
}

CellResult run_cell(const SimDesign& design, int p, double r, double delta2,
                    std::uint64_t cell_index, int threads) {
  if (design.reps < 1) throw InvalidArgument("reps must be >= 1");
  const int n = design.n;
  const double sigma2 = design.sigma_eps * design.sigma_eps;
  auto [beta_true, restr] = beta_for_delta2(p, design.k_nonzero, delta2, r, sigma2, n);
  const int q = static_cast<int>(restr.q());
  if (q < 3) throw InvalidArgument("cell has q = p - k < 3; Stein members undefined");

  const MatrixXd chol = equicorrelation(p, r).llt().matrixL();
  const CellLayout lay = cell_layout(design);
  const std::size_t n_est = lay.kinds.size();

  std::vector<double> crit(design.alpha_list.size());
  for (std::size_t i = 0; i < crit.size(); ++i)
    crit[i] = chisq_upper_quantile(design.alpha_list[i], q);

  // per-replicate squared errors; NaN marks a failed replicate
  std::vector<double> errors(static_cast<std::size_t>(design.reps) * n_est,
                             std::numeric_limits<double>::quiet_NaN());

  parallel_for(static_cast<std::size_t>(design.reps), threads, [&](std::size_t rep) {
    Rng rng = Rng::for_stream(design.seed, cell_index, rep);
    const std::uint64_t cv_seed = rng.next_u64();
    double* slot = errors.data() + rep * n_est;
    try {
      const MatrixXd X = draw_design(n, p, chol, rng);
      VectorXd y = X * beta_true;
      for (int i = 0; i < n; ++i) y(i) += design.sigma_eps * rng.normal();

      RegressionData data = RegressionData::make(X, y);
      const GramSummary g = gram_summary(data);
      const EstimatorResult ols = ols_fit(data, g);

      LassoConfig cfg;
      if (design.lambda_mode == LambdaMode::FixedSqrtN) {
        cfg.lambda = design.lambda_c * std::sqrt(static_cast<double>(n));
      } else {
        LassoConfig sel = cfg;
        sel.seed = cv_seed;
        cfg.lambda = select_lambda_cv(data, sel);
      }
      const EstimatorResult ule = lasso_fit(data, cfg);

      const ShrinkageContext ctx =
          ShrinkageContext::make(g, restr, design.alpha_list.front());
      const EstimatorResult rle = restricted_estimator(ule, ctx);

      double s2;
      TestOutcome test;
      if (design.variance_source == VarianceSource::OlsResidual) {
        s2 = sigma2_ols(data, ols, g.m);
        test = wald_statistic(ols.beta, ctx, s2, VarianceSource::OlsResidual);
      } else {
        s2 = sigma2_lasso(data, ule, g.m);
        test = wald_statistic(ule.beta, ctx, s2, VarianceSource::LassoResidual);
      }
      const EstimatorResult ssle = stein_shrinkage_lasso(ule, rle, test, ctx);
      const EstimatorResult prssle = positive_rule_lasso(ule, rle, test, ctx);

      std::size_t idx = 0;
      slot[idx++] = (ule.beta - beta_true).squaredNorm();
      slot[idx++] = (rle.beta - beta_true).squaredNorm();
      for (std::size_t ai = 0; ai < crit.size(); ++ai) {
        const bool accepted = test.statistic <= crit[ai];
        const VectorXd& chosen = accepted ? rle.beta : ule.beta;
        slot[idx++] = (chosen - beta_true).squaredNorm();
      }
      slot[idx++] = (ssle.beta - beta_true).squaredNorm();
      slot[idx++] = (prssle.beta - beta_true).squaredNorm();
    } catch (const Error&) {
      for (std::size_t e = 0; e < n_est; ++e) slot[e] = std::numeric_limits<double>::quiet_NaN();
    }
  });

  // collect, excluding failed replicates
  std::vector<std::vector<double>> per_est(n_est);
  int failures = 0;
  for (int rep = 0; rep < design.reps; ++rep) {
    const double* slot = errors.data() + static_cast<std::size_t>(rep) * n_est;
    if (std::isnan(slot[0])) {
      ++failures;
      continue;
    }
    for (std::size_t e = 0; e < n_est; ++e) per_est[e].push_back(slot[e]);
  }
  if (failures > 0.01 * design.reps)
    throw NumericFailure("cell (p=" + std::to_string(p) + ", r=" + std::to_string(r) +
                         ", delta2=" + std::to_string(delta2) + ") aborted: " +
                         std::to_string(failures) + " failed replicates");

  CellResult out;
  out.p = p;
  out.k = design.k_nonzero;
  out.r = r;
  out.delta2 = delta2;
  out.failures = failures;
  out.reps_used = design.reps - failures;

  std::vector<double> risks(n_est, 0.0);
  for (std::size_t e = 0; e < n_est; ++e) {
    double s = 0.0;
    for (double v : per_est[e]) s += v;
    risks[e] = s / per_est[e].size();
  }
  const double risk_ule = risks[0];
  for (std::size_t e = 0; e < n_est; ++e) {
    CellEstimate ce;
    ce.kind = lay.kinds[e];
    ce.alpha = lay.alphas[e];
    ce.risk = risks[e];
    ce.rel_eff = risk_ule / risks[e];
    ce.mc_se = ratio_se(per_est[0], per_est[e]);
    out.estimates.push_back(ce);
  }
  return out;
}

EfficiencyTable run_experiment(const SimDesign& design, int threads) {
  EfficiencyTable table;
  table.design = design;
  std::uint64_t cell_index = 0;
  for (int p : design.p_list) {
    if (design.k_nonzero > p) throw InvalidArgument("k_nonzero exceeds p");
    for (double r : design.r_list)
      for (double d2 : design.delta2_list)
        table.cells.push_back(run_cell(design, p, r, d2, cell_index++, threads));
  }
  return table;
}

std::string efficiency_csv(const EfficiencyTable& table) {
  std::ostringstream os;
  os << "p,k,r,delta2,estimator,alpha,rel_eff,mc_se\n";
  for (const CellResult& cell : table.cells)
    for (const CellEstimate& ce : cell.estimates) {
      os << cell.p << ',' << cell.k << ',' << format_full(cell.r) << ','
         << format_full(cell.delta2) << ',' << to_string(ce.kind) << ','
         << (ce.alpha ? format_full(*ce.alpha) : "") << ',' << format_full(ce.rel_eff) << ','
         << format_full(ce.mc_se) << '\n';
    }
  return os.str();
}

std::string efficiency_text(const EfficiencyTable& table) {
  std::ostringstream os;
  const SimDesign& d = table.design;
  os << "Relative efficiencies risk(ULE)/risk(estimator); n=" << d.n
     << ", k_nonzero=" << d.k_nonzero << ", reps=" << d.reps
     << ", sigma_eps=" << d.sigma_eps << ", lambda=" << to_string(d.lambda_mode)
     << ", seed=" << d.seed << "\n";
  os << "All estimator columns are computed on the same (p, k, delta2) cell.\n";
  char buf[64];
  for (int p : d.p_list) {
    for (double r : d.r_list) {
      os << "\n-- p=" << p << ", r=" << r << " --\n";
      std::snprintf(buf, sizeof(buf), "%8s", "delta2");
      os << buf;
      const CellLayout lay = cell_layout(d);
      for (std::size_t e = 0; e < lay.kinds.size(); ++e) {
        std::string name = to_string(lay.kinds[e]);
        if (lay.alphas[e]) {
          std::snprintf(buf, sizeof(buf), "%s(%.2f)", name.c_str(), *lay.alphas[e]);
          name = buf;
        }
        std::snprintf(buf, sizeof(buf), "%12s", name.c_str());
        os << buf;
      }
      os << '\n';
      for (const CellResult& cell : table.cells) {
        if (cell.p != p || cell.r != r) continue;
        std::snprintf(buf, sizeof(buf), "%8.2f", cell.delta2);
        os << buf;
        for (const CellEstimate& ce : cell.estimates) {
          std::snprintf(buf, sizeof(buf), "%12.2f", ce.rel_eff);
          os << buf;
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace dslasso
