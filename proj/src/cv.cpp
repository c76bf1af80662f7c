#include "dslasso/cv.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dslasso/chisq.hpp"
#include "dslasso/csv.hpp"
#include "dslasso/model_core.hpp"
#include "dslasso/parallel.hpp"
#include "dslasso/rng.hpp"

namespace dslasso {

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

struct CvLayout {
  std::vector<EstimatorKind> kinds;
  std::vector<std::optional<double>> alphas;
};

CvLayout cv_layout(const CvDesign& cfg, bool stein) {
  CvLayout lay;
  lay.kinds = {EstimatorKind::ULE, EstimatorKind::RLE};
  lay.alphas = {std::nullopt, std::nullopt};
  for (double a : cfg.alpha_list) {
    lay.kinds.push_back(EstimatorKind::PTLE);
    lay.alphas.push_back(a);
  }
  if (stein) {
    lay.kinds.push_back(EstimatorKind::SSLE);
    lay.alphas.push_back(std::nullopt);
    lay.kinds.push_back(EstimatorKind::PRSSLE);
    lay.alphas.push_back(std::nullopt);
  }
  return lay;
}

// One K-fold pass; returns total held-out squared error per layout entry.
// OLS / ROLS are carried alongside when requested (no lambda selection).
std::vector<double> kfold_pass(const RegressionData& data, const Restriction& restriction,
                               const CvDesign& cfg, std::uint64_t split_seed,
                               const CvLayout& lay, bool want_ols, double* ols_error,
                               double* rols_error) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (cfg.folds < 2) throw InvalidArgument("cv needs folds >= 2");
  const int folds = std::min<int>(cfg.folds, static_cast<int>(n));
  const std::vector<int> fold_of = cv_fold_assignment(n, folds, split_seed);

  const bool need_lasso = !lay.kinds.empty();
  std::vector<double> totals(lay.kinds.size(), 0.0);
  if (ols_error) *ols_error = 0.0;
  if (rols_error) *rols_error = 0.0;

  std::vector<double> crit(lay.kinds.size(), 0.0);
  for (std::size_t e = 0; e < lay.kinds.size(); ++e)
    if (lay.kinds[e] == EstimatorKind::PTLE)
      crit[e] = chisq_upper_quantile(*lay.alphas[e], static_cast<double>(restriction.q()));

  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
    if (test.empty()) continue;
    if (train.size() <= static_cast<std::size_t>(p))
      throw InvalidArgument("training fold smaller than p");

    MatrixXd Xtr(train.size(), p), Xte(test.size(), p);
    VectorXd ytr(train.size()), yte(test.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      Xtr.row(i) = data.X.row(train[i]);
      ytr(i) = data.y(train[i]);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      Xte.row(i) = data.X.row(test[i]);
      yte(i) = data.y(test[i]);
    }

    // center (and optionally scale) with training statistics only
    const Eigen::RowVectorXd mean = Xtr.colwise().mean();
    Xtr.rowwise() -= mean;
    Xte.rowwise() -= mean;
    if (cfg.standardize) {
      Eigen::RowVectorXd sd = (Xtr.colwise().squaredNorm() / double(train.size())).cwiseSqrt();
      for (Eigen::Index j = 0; j < p; ++j)
        if (sd(j) <= 0.0) sd(j) = 1.0;
      Xtr.array().rowwise() /= sd.array();
      Xte.array().rowwise() /= sd.array();
    }
    // With centered predictors the fitted values are mean-free, so the
    // training-response mean is the intercept: it is removed before lambda
    // selection, fitting and testing, and added back to every prediction.
    const double y_offset = ytr.mean();
    ytr.array() -= y_offset;

    RegressionData dtr = RegressionData::make(Xtr, ytr);
    const GramSummary g = gram_summary(dtr);
    const EstimatorResult ols = ols_fit(dtr, g);

    auto record = [&](const VectorXd& beta, double& total) {
      const VectorXd pred = (Xte * beta).array() + y_offset;
      total += (yte - pred).squaredNorm();
    };

    if (want_ols) {
      const ShrinkageContext ctx0 =
          ShrinkageContext::make(g, restriction, cfg.alpha_list.empty() ? 0.05
                                                                        : cfg.alpha_list.front());
      record(ols.beta, *ols_error);
      const EstimatorResult rols = restricted_estimator(ols, ctx0);
      record(rols.beta, *rols_error);
    }
    if (!need_lasso) continue;

    // nested lambda selection on the training portion
    LassoConfig sel;
    sel.cv_folds = cfg.nested_cv_folds;
    sel.seed = mix_seed(split_seed, static_cast<std::uint64_t>(f));
    sel.lambda_grid = lambda_grid_default(dtr, cfg.lambda_grid_len);
    LassoConfig fit_cfg;
    fit_cfg.lambda = select_lambda_cv(dtr, sel);

    const EstimatorResult ule = lasso_fit(dtr, fit_cfg);
    const ShrinkageContext ctx =
        ShrinkageContext::make(g, restriction, cfg.alpha_list.empty() ? 0.05
                                                                      : cfg.alpha_list.front());
    const EstimatorResult rle = restricted_estimator(ule, ctx);

    double s2;
    TestOutcome test_outcome;
    if (cfg.variance_source == VarianceSource::OlsResidual) {
      s2 = sigma2_ols(dtr, ols, g.m);
      test_outcome = wald_statistic(ols.beta, ctx, s2, VarianceSource::OlsResidual);
    } else {
      s2 = sigma2_lasso(dtr, ule, g.m);
      test_outcome = wald_statistic(ule.beta, ctx, s2, VarianceSource::LassoResidual);
    }

    const bool stein = restriction.q() >= 3;
    EstimatorResult ssle, prssle;
    if (stein) {
      ssle = stein_shrinkage_lasso(ule, rle, test_outcome, ctx);
      prssle = positive_rule_lasso(ule, rle, test_outcome, ctx);
    }

    for (std::size_t e = 0; e < lay.kinds.size(); ++e) {
      switch (lay.kinds[e]) {
        case EstimatorKind::ULE: record(ule.beta, totals[e]); break;
        case EstimatorKind::RLE: record(rle.beta, totals[e]); break;
        case EstimatorKind::PTLE: {
          const bool accepted = test_outcome.statistic <= crit[e];
          record(accepted ? rle.beta : ule.beta, totals[e]);
          break;
        }
        case EstimatorKind::SSLE:
          if (stein) record(ssle.beta, totals[e]);
          break;
        case EstimatorKind::PRSSLE:
          if (stein) record(prssle.beta, totals[e]);
          break;
        default: break;
      }
    }
  }
  return totals;
}

}  // namespace

std::vector<int> cv_fold_assignment(Eigen::Index n, int folds, std::uint64_t seed) {
  if (folds < 1) throw InvalidArgument("folds must be >= 1");
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<int> fold_of(n);
  for (Eigen::Index i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % folds);
  return fold_of;
}

double kfold_prediction_error(const RegressionData& data, const Restriction& restriction,
                              const CvDesign& cfg, EstimatorKind kind,
                              std::optional<double> alpha, std::uint64_t split_seed) {
  if (kind == EstimatorKind::PTLE && !alpha)
    throw InvalidArgument("PTLE prediction error needs an alpha");
  if (kind == EstimatorKind::OLS || kind == EstimatorKind::ROLS) {
    CvLayout empty;
    double ols_err = 0.0, rols_err = 0.0;
    kfold_pass(data, restriction, cfg, split_seed, empty, true, &ols_err, &rols_err);
    return kind == EstimatorKind::OLS ? ols_err : rols_err;
  }
  CvLayout lay;
  lay.kinds = {kind};
  lay.alphas = {alpha};
  return kfold_pass(data, restriction, cfg, split_seed, lay, false, nullptr, nullptr)[0];
}

PredictionErrorReport bootstrap_cv(const RegressionData& data, const CvDesign& cfg,
                                   int threads) {
  if (cfg.bootstrap_reps < 1) throw InvalidArgument("bootstrap_reps must be >= 1");
  const bool stein = cfg.restriction.q() >= 3;
  PredictionErrorReport report;
  if (!stein)
    report.warnings.push_back("q < 3: SSLE/PRSSLE omitted (shrink constant not positive)");
  const CvLayout lay = cv_layout(cfg, stein);
  const std::size_t n_est = lay.kinds.size();
  const Eigen::Index n = data.n();

  std::vector<double> errors(static_cast<std::size_t>(cfg.bootstrap_reps) * n_est,
                             std::numeric_limits<double>::quiet_NaN());

  parallel_for(static_cast<std::size_t>(cfg.bootstrap_reps), threads, [&](std::size_t rep) {
    Rng rng = Rng::for_stream(cfg.seed, 0x626f6f74ULL, rep);  // bootstrap stream
    MatrixXd Xb(n, data.p());
    VectorXd yb(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index src = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
      Xb.row(i) = data.X.row(src);
      yb(i) = data.y(src);
    }
    const std::uint64_t split_seed = rng.next_u64();
    double* slot = errors.data() + rep * n_est;
    try {
      RegressionData db = RegressionData::make(Xb, yb);
      const std::vector<double> totals =
          kfold_pass(db, cfg.restriction, cfg, split_seed, lay, false, nullptr, nullptr);
      for (std::size_t e = 0; e < n_est; ++e) slot[e] = totals[e];
    } catch (const Error&) {
      // leave NaN; counted below
    }
  });

  report.series.assign(n_est, {});
  int failures = 0;
  for (int rep = 0; rep < cfg.bootstrap_reps; ++rep) {
    const double* slot = errors.data() + static_cast<std::size_t>(rep) * n_est;
    if (std::isnan(slot[0])) {
      ++failures;
      continue;
    }
    for (std::size_t e = 0; e < n_est; ++e) report.series[e].push_back(slot[e]);
  }
  report.failures = failures;
  if (failures > 0.01 * cfg.bootstrap_reps)
    throw NumericFailure("bootstrap aborted: " + std::to_string(failures) +
                         " failed replicates out of " + std::to_string(cfg.bootstrap_reps));

  for (std::size_t e = 0; e < n_est; ++e) {
    PredictionErrorRow row;
    row.kind = lay.kinds[e];
    row.alpha = lay.alphas[e];
    const auto& s = report.series[e];
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= s.size();
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    row.mean = mean;
    row.sd = s.size() > 1 ? std::sqrt(var / (s.size() - 1)) : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

std::string prediction_error_csv(const PredictionErrorReport& report) {
  std::ostringstream os;
  os << "estimator,alpha,mean_pe,sd_pe\n";
  for (const auto& row : report.rows)
    os << to_string(row.kind) << ',' << (row.alpha ? format_full(*row.alpha) : "") << ','
       << format_full(row.mean) << ',' << format_full(row.sd) << '\n';
  return os.str();
}

std::string prediction_error_text(const PredictionErrorReport& report) {
  std::ostringstream os;
  char buf[64];
  os << "Prediction error (total squared error over held-out folds), bootstrap mean / sd\n";
  std::snprintf(buf, sizeof(buf), "%-14s%16s%16s\n", "estimator", "mean", "sd");
  os << buf;
  for (const auto& row : report.rows) {
    std::string name = to_string(row.kind);
    if (row.alpha) {
      std::snprintf(buf, sizeof(buf), "%s(%.2f)", name.c_str(), *row.alpha);
      name = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-14s%16.4f%16.4f\n", name.c_str(), row.mean, row.sd);
    os << buf;
  }
  return os.str();
}

std::string prediction_error_series_csv(const PredictionErrorReport& report) {
  std::ostringstream os;
  os << "estimator,alpha,rep,error\n";
  for (std::size_t e = 0; e < report.rows.size(); ++e)
    for (std::size_t rep = 0; rep < report.series[e].size(); ++rep)
      os << to_string(report.rows[e].kind) << ','
         << (report.rows[e].alpha ? format_full(*report.rows[e].alpha) : "") << ',' << rep
         << ',' << format_full(report.series[e][rep]) << '\n';
  return os.str();
}

Restriction prostate_restriction() {
  MatrixXd H(3, 8);
  H << -1, 3, 1, -1, 0, -1, 0, 0,
       -1, 1, 0, -1, 0, 1, 0, 0,
        1, 0, -1, 1, 0, 0, 1, 0;
  return Restriction::make(H, VectorXd::Zero(3));
}

}  // namespace dslasso
