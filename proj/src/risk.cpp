#include "dslasso/risk.hpp"

#include <cmath>

#include "dslasso/chisq.hpp"

namespace dslasso {

RiskScenario RiskScenario::make(int p, int q, double sigma2, MatrixXd C, MatrixXd W, MatrixXd H,
                                VectorXd h, VectorXd xi, double alpha) {
  if (p < 1 || q < 1 || q > p) throw InvalidArgument("need 1 <= q <= p");
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0,1)");
  if (C.rows() != p || C.cols() != p) throw InvalidArgument("C must be p x p");
  if (W.rows() != p || W.cols() != p) throw InvalidArgument("W must be p x p");
  if (H.rows() != q || H.cols() != p) throw InvalidArgument("H must be q x p");
  if (h.size() != q || xi.size() != q) throw InvalidArgument("h, xi must have length q");
  Restriction::make(H, h);  // rank check

  RiskScenario s;
  s.p = p;
  s.q = q;
  s.sigma2 = sigma2;
  s.C = std::move(C);
  s.W = std::move(W);
  s.H = std::move(H);
  s.h = std::move(h);
  s.xi = std::move(xi);
  s.alpha = alpha;

  Eigen::LLT<MatrixXd> llt(s.C);
  if (llt.info() != Eigen::Success) throw InvalidArgument("C is not positive definite");
  s.C_inv = llt.solve(MatrixXd::Identity(p, p));

  const MatrixXd CiHt = s.C_inv * s.H.transpose();
  const MatrixXd HCiHt = s.H * CiHt;
  Eigen::LLT<MatrixXd> llt2(HCiHt);
  if (llt2.info() != Eigen::Success)
    throw InvalidArgument("H C^-1 H^T is not positive definite");
  const MatrixXd core = llt2.solve(MatrixXd::Identity(q, q));

  s.delta = CiHt * core * s.xi;
  s.A = s.C_inv - CiHt * core * CiHt.transpose();

  const double gap = (s.H * s.delta - s.xi).lpNorm<Eigen::Infinity>();
  if (!(gap <= 1e-8 * (1.0 + s.xi.lpNorm<Eigen::Infinity>())))
    throw NumericFailure("H delta != xi (gap " + std::to_string(gap) + ")");
  return s;
}

double noncentrality(const RiskScenario& s) {
  const MatrixXd HCiHt = s.H * s.C_inv * s.H.transpose();
  Eigen::LLT<MatrixXd> llt(HCiHt);
  const VectorXd u = llt.solve(s.xi);
  const double via_xi = s.xi.dot(u) / s.sigma2;
  const double via_delta = s.delta.dot(s.C * s.delta) / s.sigma2;
  if (std::abs(via_xi - via_delta) > 1e-8 * (1.0 + std::abs(via_xi)))
    throw NumericFailure("noncentrality cross-check failed: " + std::to_string(via_xi) +
                         " vs " + std::to_string(via_delta));
  return via_xi;
}

namespace {

struct Pieces {
  double k;            // q - 2
  double crit;         // chi-square(q) upper-alpha value
  double H_q2, H_q4;   // noncentral CDFs at crit, dof q+2 / q+4
  double E2_q2, E2_q4; // E[chi^-2] at dof q+2 / q+4
  double E4_q4;        // E[chi^-4] at dof q+4
  double trunc1_q2;    // E[(1 - k chi^-2_{q+2}) I(chi^2_{q+2} <= k)]
  double trunc1_q4;    // same with dof q+4
  double trunc2_q2;    // E[(1 - k chi^-2_{q+2})^2 I(chi^2_{q+2} <= k)]
  VectorXd delta;      // delta scaled to the requested noncentrality
};

Pieces compute_pieces(const RiskScenario& s, double delta2, bool stein) {
  Pieces pc;
  pc.k = s.q - 2;
  pc.crit = chisq_upper_quantile(s.alpha, s.q);
  pc.H_q2 = noncentral_chisq_cdf(pc.crit, s.q + 2, delta2);
  pc.H_q4 = noncentral_chisq_cdf(pc.crit, s.q + 4, delta2);

  // delta direction rescaled so sigma^-2 delta^T C delta = delta2
  const double base = s.delta.dot(s.C * s.delta) / s.sigma2;
  if (base <= 0.0) {
    if (delta2 > 0.0)
      throw InvalidArgument("scenario xi is zero; cannot scale to delta2 > 0");
    pc.delta = VectorXd::Zero(s.p);
  } else {
    pc.delta = s.delta * std::sqrt(delta2 / base);
  }

  if (stein) {
    pc.E2_q2 = inv_moment(s.q, 2, InvPower::Two, delta2);
    pc.E2_q4 = inv_moment(s.q, 4, InvPower::Two, delta2);
    pc.E4_q4 = inv_moment(s.q, 4, InvPower::Four, delta2);
    const double k = pc.k;
    const double p1_q2 = noncentral_chisq_cdf(k, s.q + 2, delta2);
    const double p1_q4 = noncentral_chisq_cdf(k, s.q + 4, delta2);
    const double e2i_q2 = inv_moment(s.q, 2, InvPower::Two, delta2, k);
    const double e2i_q4 = inv_moment(s.q, 4, InvPower::Two, delta2, k);
    const double e4i_q2 = inv_moment(s.q, 2, InvPower::Four, delta2, k);
    pc.trunc1_q2 = p1_q2 - k * e2i_q2;
    pc.trunc1_q4 = p1_q4 - k * e2i_q4;
    pc.trunc2_q2 = p1_q2 - 2.0 * k * e2i_q2 + k * k * e4i_q2;
  } else {
    pc.E2_q2 = pc.E2_q4 = pc.E4_q4 = 0.0;
    pc.trunc1_q2 = pc.trunc1_q4 = pc.trunc2_q2 = 0.0;
  }
  return pc;
}

double quadratic_bias(const RiskScenario& s, const VectorXd& b) {
  return b.dot(s.C * b) / s.sigma2;
}

}  // namespace

RiskAuxiliaries risk_auxiliaries(const RiskScenario& s, double delta2) {
  if (s.q < 3) throw QTooSmall("risk auxiliaries need q >= 3");
  const Pieces pc = compute_pieces(s, delta2, true);
  RiskAuxiliaries aux;
  aux.z = 2.0 * pc.H_q2 - pc.H_q4;
  aux.x = 2.0 * pc.E2_q2 - pc.k * pc.E2_q4;
  aux.q = 2.0 * pc.trunc1_q2 - pc.trunc1_q4;
  return aux;
}

AsymptoticRisks asymptotic_risks(const RiskScenario& s, double delta2) {
  if (delta2 < 0.0) throw InvalidArgument("delta2 must be >= 0");
  const bool stein = s.q >= 3;
  const Pieces pc = compute_pieces(s, delta2, stein);

  const MatrixXd proj = s.C_inv - s.A;  // C^-1 H^T (H C^-1 H^T)^-1 H C^-1, rank q
  const double tr_W_Cinv = (s.W * s.C_inv).trace();
  const double tr_W_A = (s.W * s.A).trace();
  const double tr_W_proj = (s.W * proj).trace();
  const double tr_shrink = s.weighted_shrink_trace ? tr_W_proj : proj.trace();
  const VectorXd& d = pc.delta;
  const double dWd = d.dot(s.W * d);
  const MatrixXd ddT = d * d.transpose();

  AsymptoticRisks out;

  // unrestricted
  out.ule.bias = VectorXd::Zero(s.p);
  out.ule.quadratic_bias = 0.0;
  out.ule.mse = s.sigma2 * s.C_inv;
  out.ule.risk = s.sigma2 * tr_W_Cinv;

  // restricted: limit N(-delta, sigma^2 A)
  out.rle.bias = -d;
  out.rle.quadratic_bias = quadratic_bias(s, out.rle.bias);
  out.rle.mse = s.sigma2 * s.A + ddT;
  out.rle.risk = s.sigma2 * tr_W_A + dWd;

  // preliminary test
  const double z = 2.0 * pc.H_q2 - pc.H_q4;
  out.ptle.bias = -d * pc.H_q2;
  out.ptle.quadratic_bias = quadratic_bias(s, out.ptle.bias);
  out.ptle.mse = s.sigma2 * s.C_inv - s.sigma2 * proj * pc.H_q2 + ddT * z;
  out.ptle.risk = s.sigma2 * tr_W_Cinv - s.sigma2 * tr_W_proj * pc.H_q2 + dWd * z;

  if (!stein) return out;

  const double k = pc.k;
  // Stein-type shrinkage
  EstimatorRisk ssle;
  const double x = 2.0 * pc.E2_q2 - k * pc.E2_q4;
  ssle.bias = -k * d * pc.E2_q2;
  ssle.quadratic_bias = quadratic_bias(s, ssle.bias);
  ssle.mse = s.sigma2 * s.C_inv - k * s.sigma2 * proj * x + k * (k + 4.0) * ddT * pc.E4_q4;
  ssle.risk = s.sigma2 * tr_W_Cinv - k * s.sigma2 * tr_shrink * x +
              k * (k + 4.0) * dWd * pc.E4_q4;

  // positive rule
  EstimatorRisk prssle;
  const double qaux = 2.0 * pc.trunc1_q2 - pc.trunc1_q4;
  prssle.bias = ssle.bias - d * pc.trunc1_q2;
  prssle.quadratic_bias = quadratic_bias(s, prssle.bias);
  prssle.mse = ssle.mse - s.sigma2 * proj * pc.trunc2_q2 - ddT * qaux;
  prssle.risk = ssle.risk - s.sigma2 * tr_shrink * pc.trunc2_q2 - dWd * qaux;

  out.ssle = std::move(ssle);
  out.prssle = std::move(prssle);
  return out;
}

RiskTable risk_curves(const RiskScenario& s, const std::vector<double>& delta2_grid,
                      const std::vector<double>& alphas) {
  if (delta2_grid.empty()) throw InvalidArgument("delta2 grid is empty");
  for (std::size_t i = 0; i < delta2_grid.size(); ++i) {
    if (delta2_grid[i] < 0.0) throw InvalidArgument("delta2 grid must be non-negative");
    if (i > 0 && !(delta2_grid[i] > delta2_grid[i - 1]))
      throw InvalidArgument("delta2 grid must be ascending");
  }
  if (alphas.empty()) throw InvalidArgument("alpha list is empty");

  RiskTable table;
  table.delta2_grid = delta2_grid;
  auto push = [&table](double d2, EstimatorKind kind, std::optional<double> alpha,
                       const EstimatorRisk& r) {
    table.rows.push_back({d2, kind, alpha, r.bias.norm(), r.quadratic_bias, r.risk});
  };
  for (double d2 : delta2_grid) {
    RiskScenario sc = s;
    sc.alpha = alphas.front();
    const AsymptoticRisks base = asymptotic_risks(sc, d2);
    push(d2, EstimatorKind::ULE, std::nullopt, base.ule);
    push(d2, EstimatorKind::RLE, std::nullopt, base.rle);
    for (double a : alphas) {
      RiskScenario sa = s;
      sa.alpha = a;
      const AsymptoticRisks ra = asymptotic_risks(sa, d2);
      push(d2, EstimatorKind::PTLE, a, ra.ptle);
    }
    if (base.ssle) push(d2, EstimatorKind::SSLE, std::nullopt, *base.ssle);
    if (base.prssle) push(d2, EstimatorKind::PRSSLE, std::nullopt, *base.prssle);
  }
  return table;
}

RiskScenario reference_scenario(double sigma2, double alpha) {
  const int p = 4, q = 3;
  MatrixXd H(q, p);
  H << 1, -1, 3, 1,
       3, 2, 1, 0,
       4, -2, 0, 5;
  return RiskScenario::make(p, q, sigma2, MatrixXd::Identity(p, p), MatrixXd::Identity(p, p),
                            H, VectorXd::Zero(q), VectorXd::Ones(q), alpha);
}

}  // namespace dslasso
