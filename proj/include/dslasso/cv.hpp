#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dslasso/shrinkage.hpp"
#include "dslasso/types.hpp"

namespace dslasso {

/// K-fold prediction-error protocol under bootstrap resampling.
struct CvDesign {
  int folds = 10;
  int bootstrap_reps = 1000;
  std::vector<double> alpha_list{0.01, 0.05, 0.10};
  Restriction restriction;
  std::uint64_t seed = 0;
  std::string response_column;
  VarianceSource variance_source = VarianceSource::OlsResidual;
  // Predictors are centered per training fold and the training-response mean
  // serves as the intercept of every prediction.
  bool standardize = false;  // optional unit-variance scaling (train statistics)
  int lambda_grid_len = 20;      // nested-CV grid size for lambda selection
  int nested_cv_folds = 10;
};

/// Fold index per row: a seeded shuffle dealt round-robin into `folds`
/// near-equal disjoint subsets. Shared by every CV pass in this module.
std::vector<int> cv_fold_assignment(Eigen::Index n, int folds, std::uint64_t seed);

/// Total squared prediction error over all held-out points of one K-fold
/// pass. Rows are partitioned by cv_fold_assignment; centering (and optional
/// standardization) statistics come from the training portion only; lambda is
/// chosen by nested cross-validation inside each training portion.
/// alpha is required for PTLE and ignored otherwise.
double kfold_prediction_error(const RegressionData& data, const Restriction& restriction,
                              const CvDesign& cfg, EstimatorKind kind,
                              std::optional<double> alpha, std::uint64_t split_seed);

struct PredictionErrorRow {
  EstimatorKind kind = EstimatorKind::ULE;
  std::optional<double> alpha;
  double mean = 0.0;
  double sd = 0.0;
};

struct PredictionErrorReport {
  std::vector<PredictionErrorRow> rows;
  // per-replicate error series, same order as rows (series[row][rep])
  std::vector<std::vector<double>> series;
  int failures = 0;
  std::vector<std::string> warnings;
};

/// Bootstrap-over-CV protocol: resample rows with replacement, run the K-fold
/// pass for ULE, RLE, PTLE (each alpha), SSLE, PRSSLE, and report the mean and
/// standard deviation of the prediction error across replicates.
/// Deterministic given (data, cfg, seed); independent of thread count.
PredictionErrorReport bootstrap_cv(const RegressionData& data, const CvDesign& cfg,
                                   int threads);

/// CSV with columns estimator,alpha,mean_pe,sd_pe.
std::string prediction_error_csv(const PredictionErrorReport& report);

/// Aligned-text table of the same report.
std::string prediction_error_text(const PredictionErrorReport& report);

/// Per-replicate error series as CSV (estimator,alpha,rep,error), for external plotting.
std::string prediction_error_series_csv(const PredictionErrorReport& report);

/// The 3 x 8 restriction used for the prostate study, h = 0.
Restriction prostate_restriction();

}  // namespace dslasso
