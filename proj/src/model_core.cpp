#include "dslasso/model_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace dslasso {

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::ULE: return "ULE";
    case EstimatorKind::RLE: return "RLE";
    case EstimatorKind::PTLE: return "PTLE";
    case EstimatorKind::SSLE: return "SSLE";
    case EstimatorKind::PRSSLE: return "PRSSLE";
    case EstimatorKind::OLS: return "OLS";
    case EstimatorKind::ROLS: return "ROLS";
  }
  return "?";
}

RegressionData RegressionData::make(MatrixXd X, VectorXd y) {
  if (X.cols() < 1) throw InvalidArgument("design needs at least one column");
  if (X.rows() != y.size()) throw InvalidArgument("X and y row counts differ");
  if (X.rows() <= X.cols())
    throw InvalidArgument("need n > p (got n=" + std::to_string(X.rows()) +
                          ", p=" + std::to_string(X.cols()) + ")");
  if (!X.allFinite()) throw InvalidArgument("design matrix has non-finite entries");
  if (!y.allFinite()) throw InvalidArgument("response has non-finite entries");
  RegressionData d;
  d.X = std::move(X);
  d.y = std::move(y);
  return d;
}

Restriction Restriction::make(MatrixXd H, VectorXd h) {
  const Eigen::Index q = H.rows();
  if (q < 1 || q > H.cols()) throw InvalidArgument("restriction needs 1 <= q <= p");
  if (h.size() != q) throw InvalidArgument("H and h dimensions differ");
  Eigen::ColPivHouseholderQR<MatrixXd> qr(H);
  const double tol = 1e-10 * H.norm();
  const auto& R = qr.matrixR();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < std::min(H.rows(), H.cols()); ++i)
    if (std::abs(R(i, i)) > tol) ++rank;
  if (rank != q)
    throw InvalidArgument("restriction matrix H is rank deficient (rank " +
                          std::to_string(rank) + " < q=" + std::to_string(q) + ")");
  Restriction r;
  r.H = std::move(H);
  r.h = std::move(h);
  return r;
}

GramSummary gram_summary(const RegressionData& data) {
  GramSummary g;
  g.C.noalias() = data.X.transpose() * data.X;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g.C, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-10 * hi))
    throw SingularDesign("X^T X is numerically singular (eigenvalue ratio " +
                         std::to_string(hi > 0 ? lo / hi : 0.0) + ")");
  Eigen::LLT<MatrixXd> llt(g.C);
  if (llt.info() != Eigen::Success) throw SingularDesign("Cholesky of X^T X failed");
  g.C_inv = llt.solve(MatrixXd::Identity(g.C.rows(), g.C.cols()));
  g.m = static_cast<int>(data.n() - data.p());
  return g;
}

EstimatorResult ols_fit(const RegressionData& data, const GramSummary& g) {
  EstimatorResult r;
  r.kind = EstimatorKind::OLS;
  r.beta.noalias() = g.C_inv * (data.X.transpose() * data.y);
  return r;
}

double sigma2_ols(const RegressionData& data, const EstimatorResult& fit, int m) {
  if (fit.kind != EstimatorKind::OLS) throw InvalidArgument("sigma2_ols needs an OLS fit");
  if (m < 1) throw InvalidArgument("sigma2_ols needs m >= 1");
  const VectorXd resid = data.y - data.X * fit.beta;
  return resid.squaredNorm() / m;
}

double sigma2_lasso(const RegressionData& data, const EstimatorResult& lasso_fit, int m) {
  if (lasso_fit.kind != EstimatorKind::ULE)
    throw InvalidArgument("sigma2_lasso needs a LASSO (ULE) fit");
  if (m < 1) throw InvalidArgument("sigma2_lasso needs m >= 1");
  const VectorXd resid = data.y - data.X * lasso_fit.beta;
  return resid.squaredNorm() / m;
}

RegressionData center_columns(const RegressionData& data, bool center_response) {
  RegressionData out = data;
  out.column_means = data.X.colwise().mean();
  out.X = data.X.rowwise() - out.column_means.transpose();
  if (center_response) out.y = data.y.array() - data.y.mean();
  out.centered = true;
  return out;
}

}  // namespace dslasso
