#include <doctest.h>

#include <cmath>

#include "dslasso/chisq.hpp"
#include "dslasso/model_core.hpp"
#include "dslasso/risk.hpp"
#include "dslasso/shrinkage.hpp"
#include "support.hpp"

using namespace dslasso;
using testsupport::random_matrix;
using testsupport::random_restriction;
using testsupport::random_spd;
using testsupport::random_vector;

namespace {

RiskScenario random_scenario(int p, int q, double sigma2, double alpha, testsupport::Rng& rng) {
  const Restriction r = random_restriction(q, p, rng, false);
  return RiskScenario::make(p, q, sigma2, random_spd(p, rng), MatrixXd::Identity(p, p), r.H,
                            r.h, random_vector(q, rng), alpha);
}

}  // namespace

TEST_SUITE_BEGIN("risk-analytics");

TEST_CASE("scenario caches satisfy the projection identities") {
  testsupport::Rng rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    const RiskScenario s = random_scenario(6, 3, 1.7, 0.1, rng);
    CHECK((s.H * s.delta - s.xi).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK((s.A * s.H.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s.A - s.A.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s.A);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
    // tr(C (C^-1 - A)) = q: the removed piece is a rank-q projector in C-geometry
    CHECK((s.C * (s.C_inv - s.A)).trace() == doctest::Approx(3.0).epsilon(1e-8));
  }
}

TEST_CASE("noncentrality: zero direction, scalar case, dual-formula agreement") {
  MatrixXd H(1, 2);
  H << 1, 0;
  RiskScenario s =
      RiskScenario::make(2, 1, 1.0, MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2), H,
                         VectorXd::Zero(1), (VectorXd(1) << 2.0).finished(), 0.05);
  CHECK(noncentrality(s) == doctest::Approx(4.0).epsilon(1e-12));

  RiskScenario z = s;
  z.xi.setZero();
  z.delta.setZero();
  CHECK(noncentrality(z) == doctest::Approx(0.0));

  // reference configuration and random SPD C: both formulas agree (checked
  // internally to 1e-8; verify explicitly to 1e-10 here)
  testsupport::Rng rng(52);
  for (int rep = 0; rep < 10; ++rep) {
    RiskScenario sc = random_scenario(5, 3, 2.3, 0.2, rng);
    const MatrixXd HCiHt = sc.H * sc.C_inv * sc.H.transpose();
    const double via_xi = sc.xi.dot(HCiHt.ldlt().solve(sc.xi)) / sc.sigma2;
    const double via_delta = sc.delta.dot(sc.C * sc.delta) / sc.sigma2;
    CHECK(via_xi == doctest::Approx(via_delta).epsilon(1e-10));
    CHECK(noncentrality(sc) == doctest::Approx(via_xi).epsilon(1e-12));
  }
  const RiskScenario ref = reference_scenario(1.0, 0.15);
  CHECK(noncentrality(ref) > 0.0);
}

TEST_CASE("auxiliaries vanish in the degenerate limits") {
  RiskScenario s = reference_scenario(1.0, 0.999999);  // critical value near 0
  const RiskAuxiliaries aux = risk_auxiliaries(s, 0.0);
  CHECK(std::abs(aux.z) < 1e-5);
  // truncated expectations at truncation 0 are empty events
  CHECK(inv_moment(3, 2, InvPower::Two, 0.5, 0.0) == 0.0);
  CHECK(inv_moment(3, 4, InvPower::Two, 0.5, 0.0) == 0.0);
}

TEST_CASE("auxiliaries against composed sampling oracles (q=3, alpha=0.05, d2=1)") {
  RiskScenario s = reference_scenario(1.0, 0.05);
  const RiskAuxiliaries aux = risk_auxiliaries(s, 1.0);
  const double crit = chisq_upper_quantile(0.05, 3);
  const std::size_t draws = 2000000;

  const auto h2 = testsupport::mc_noncentral_cdf(crit, 5, 1.0, draws, 101);
  const auto h4 = testsupport::mc_noncentral_cdf(crit, 7, 1.0, draws, 102);
  CHECK(std::abs(aux.z - (2.0 * h2.mean - h4.mean)) < 3.0 * (2.0 * h2.se + h4.se));

  const auto e2 = testsupport::mc_inverse_moment(5, 1.0, 2, draws, 103);
  const auto e4 = testsupport::mc_inverse_moment(7, 1.0, 2, draws, 104);
  CHECK(std::abs(aux.x - (2.0 * e2.mean - 1.0 * e4.mean)) < 3.0 * (2.0 * e2.se + e4.se));

  // q combines truncated pieces; assemble it from sampled parts (k = 1)
  const auto p2 = testsupport::mc_noncentral_cdf(1.0, 5, 1.0, draws, 105);
  const auto p4 = testsupport::mc_noncentral_cdf(1.0, 7, 1.0, draws, 106);
  const auto t2 = testsupport::mc_inverse_moment(5, 1.0, 2, draws, 107, 1.0);
  const auto t4 = testsupport::mc_inverse_moment(7, 1.0, 2, draws, 108, 1.0);
  const double q_mc = 2.0 * (p2.mean - t2.mean) - (p4.mean - t4.mean);
  const double q_se = 2.0 * (p2.se + t2.se) + p4.se + t4.se;
  CHECK(std::abs(aux.q - q_mc) < 3.0 * q_se);
}

TEST_CASE("risk blocks at the null: projector-trace desk values") {
  // p=4, q=3, C=W=I, sigma2=1: reference values from the closed formulas
  for (double alpha : {0.15, 0.20, 0.25}) {
    RiskScenario s = reference_scenario(1.0, alpha);
    const AsymptoticRisks r = asymptotic_risks(s, 0.0);
    CHECK(r.ule.risk == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(r.rle.risk == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(r.ssle);
    REQUIRE(r.prssle);
    CHECK(r.ssle->risk == doctest::Approx(2.6).epsilon(1e-10));
    CHECK(r.prssle->risk == doctest::Approx(2.2025039138024).epsilon(1e-8));
    CHECK(r.rle.quadratic_bias == doctest::Approx(0.0));
    CHECK(r.ptle.quadratic_bias == doctest::Approx(0.0));
  }
  // PTLE null risks at the three levels
  CHECK(asymptotic_risks(reference_scenario(1.0, 0.15), 0.0).ptle.risk ==
        doctest::Approx(2.135273038351).epsilon(1e-9));
  CHECK(asymptotic_risks(reference_scenario(1.0, 0.20), 0.0).ptle.risk ==
        doctest::Approx(2.383481722706).epsilon(1e-9));
  CHECK(asymptotic_risks(reference_scenario(1.0, 0.25), 0.0).ptle.risk ==
        doctest::Approx(2.601774517975).epsilon(1e-9));
}

TEST_CASE("risks scale linearly in sigma2 at fixed noncentrality") {
  RiskScenario s1 = reference_scenario(1.0, 0.2);
  RiskScenario s10 = reference_scenario(10.0, 0.2);
  for (double d2 : {0.0, 1.0, 5.0}) {
    const AsymptoticRisks a = asymptotic_risks(s1, d2);
    const AsymptoticRisks b = asymptotic_risks(s10, d2);
    CHECK(b.ule.risk == doctest::Approx(10.0 * a.ule.risk).epsilon(1e-9));
    CHECK(b.rle.risk == doctest::Approx(10.0 * a.rle.risk).epsilon(1e-9));
    CHECK(b.ptle.risk == doctest::Approx(10.0 * a.ptle.risk).epsilon(1e-9));
    CHECK(b.ssle->risk == doctest::Approx(10.0 * a.ssle->risk).epsilon(1e-9));
    CHECK(b.prssle->risk == doctest::Approx(10.0 * a.prssle->risk).epsilon(1e-9));
  }
}

TEST_CASE("quadratic bias is consistent with the bias vector") {
  testsupport::Rng rng(53);
  for (double d2 : {0.0, 1.0, 4.0}) {
    const RiskScenario s = random_scenario(5, 3, 1.5, 0.2, rng);
    const AsymptoticRisks r = asymptotic_risks(s, d2);
    for (const EstimatorRisk* er :
         {&r.ule, &r.rle, &r.ptle, &*r.ssle, &*r.prssle}) {
      const double recomputed = er->bias.dot(s.C * er->bias) / s.sigma2;
      CHECK(er->quadratic_bias == doctest::Approx(recomputed).epsilon(1e-10));
    }
    // PTLE quadratic bias has the closed form D2 * H_{q+2}(crit; D2)^2
    const double crit = chisq_upper_quantile(s.alpha, s.q);
    const double H2 = noncentral_chisq_cdf(crit, s.q + 2, d2);
    CHECK(r.ptle.quadratic_bias == doctest::Approx(d2 * H2 * H2).epsilon(1e-8));
  }
}

TEST_CASE("PTLE quadratic bias matches a sampling oracle at q=3, alpha=0.2, d2=1") {
  RiskScenario s = reference_scenario(1.0, 0.2);
  const AsymptoticRisks r = asymptotic_risks(s, 1.0);
  const double crit = chisq_upper_quantile(0.2, 3);
  const auto h2 = testsupport::mc_noncentral_cdf(crit, 5, 1.0, 2000000, 109);
  const double mc = 1.0 * h2.mean * h2.mean;
  const double se = 2.0 * h2.mean * h2.se;  // delta method for the square
  CHECK(std::abs(r.ptle.quadratic_bias - mc) < 3.0 * se);
}

TEST_CASE("risk equals the weighted trace of the MSE matrix") {
  testsupport::Rng rng(54);
  // W = I: both block forms coincide
  for (double d2 : {0.0, 2.0}) {
    const RiskScenario s = random_scenario(5, 3, 1.2, 0.15, rng);
    const AsymptoticRisks r = asymptotic_risks(s, d2);
    CHECK(r.ule.risk == doctest::Approx((s.W * r.ule.mse).trace()).epsilon(1e-9));
    CHECK(r.rle.risk == doctest::Approx((s.W * r.rle.mse).trace()).epsilon(1e-9));
    CHECK(r.ptle.risk == doctest::Approx((s.W * r.ptle.mse).trace()).epsilon(1e-9));
    CHECK(r.ssle->risk == doctest::Approx((s.W * r.ssle->mse).trace()).epsilon(1e-9));
    CHECK(r.prssle->risk == doctest::Approx((s.W * r.prssle->mse).trace()).epsilon(1e-9));
  }
  // general W: trace consistency for the Stein blocks needs the weighted
  // variant of the (printed unweighted) shrink-term traces
  RiskScenario s = random_scenario(5, 3, 1.2, 0.15, rng);
  s.W = random_spd(5, rng);
  s.weighted_shrink_trace = true;
  const AsymptoticRisks rw = asymptotic_risks(s, 1.5);
  CHECK(rw.ssle->risk == doctest::Approx((s.W * rw.ssle->mse).trace()).epsilon(1e-9));
  CHECK(rw.prssle->risk == doctest::Approx((s.W * rw.prssle->mse).trace()).epsilon(1e-9));
}

TEST_CASE("large noncentrality washes out the corrections") {
  RiskScenario s = reference_scenario(1.0, 0.15);
  const AsymptoticRisks r = asymptotic_risks(s, 1e4);
  CHECK(std::abs(r.ptle.risk - r.ule.risk) / r.ule.risk < 1e-3);
  CHECK(std::abs(r.ssle->risk - r.ule.risk) / r.ule.risk < 1e-2);
  CHECK(std::abs(r.prssle->risk - r.ule.risk) / r.ule.risk < 1e-2);
}

TEST_CASE("risk curves: orderings and constancy on the grid") {
  RiskScenario s = reference_scenario(1.0, 0.15);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(2.5 * i);
  const RiskTable table = risk_curves(s, grid, {0.05, 0.15, 0.25});

  double r1_first = -1.0;
  for (const RiskTableRow& row : table.rows) {
    if (row.kind == EstimatorKind::ULE) {
      if (r1_first < 0)
        r1_first = row.adqr;
      else
        CHECK(row.adqr == doctest::Approx(r1_first).epsilon(1e-12));  // constant in delta2
    }
  }
  // at the null: R2 <= R5 <= R4 <= R1
  double r1 = 0, r2 = 0, r4 = 0, r5 = 0, pt_05 = 0, pt_25 = 0;
  for (const RiskTableRow& row : table.rows) {
    if (row.delta2 != 0.0) continue;
    switch (row.kind) {
      case EstimatorKind::ULE: r1 = row.adqr; break;
      case EstimatorKind::RLE: r2 = row.adqr; break;
      case EstimatorKind::SSLE: r4 = row.adqr; break;
      case EstimatorKind::PRSSLE: r5 = row.adqr; break;
      case EstimatorKind::PTLE:
        if (*row.alpha == 0.05) pt_05 = row.adqr;
        if (*row.alpha == 0.25) pt_25 = row.adqr;
        break;
      default: break;
    }
  }
  CHECK(r2 <= r5);
  CHECK(r5 <= r4);
  CHECK(r4 <= r1);
  CHECK(pt_05 < pt_25);  // smaller alpha performs better at the null

  CHECK_THROWS_AS(risk_curves(s, {}, {0.05}), InvalidArgument);
  CHECK_THROWS_AS(risk_curves(s, {1.0, 0.5}, {0.05}), InvalidArgument);
  CHECK_THROWS_AS(risk_curves(s, {0.0, 1.0}, {}), InvalidArgument);
}

TEST_CASE("restricted least squares empirical risk approaches the analytic value") {
  // light version of the large-n bridge: n=2000, 150 replicates, 10% band
  const int n = 2000, p = 6, q = 3, reps = 150;
  testsupport::Rng rng(55);
  const Restriction restr = random_restriction(q, p, rng, false);
  RiskScenario s =
      RiskScenario::make(p, q, 4.0, MatrixXd::Identity(p, p), MatrixXd::Identity(p, p),
                         restr.H, restr.h, VectorXd::Zero(q), 0.05);
  const double analytic = asymptotic_risks(s, 0.0).rle.risk;

  VectorXd beta = random_vector(p, rng);
  beta -= restr.H.transpose() * (restr.H * restr.H.transpose()).ldlt().solve(restr.H * beta);

  double acc = 0.0;
  for (int repi = 0; repi < reps; ++repi) {
    testsupport::Rng rr(7000 + repi);
    const MatrixXd X = random_matrix(n, p, rr);
    VectorXd y = X * beta;
    for (int i = 0; i < n; ++i) y(i) += 2.0 * rr.normal();
    RegressionData d = RegressionData::make(X, y);
    GramSummary g = gram_summary(d);
    const ShrinkageContext ctx = ShrinkageContext::make(g, restr, 0.05);
    const EstimatorResult rols = restricted_estimator(ols_fit(d, g), ctx);
    acc += n * (rols.beta - beta).squaredNorm();
  }
  const double empirical = acc / reps;
  CHECK(std::abs(empirical - analytic) / analytic < 0.10);
}

TEST_SUITE_END();
