// Shared test utilities: independent sampling oracles, random instance
// generators, and the synthetic stand-in dataset for the prostate protocol.
#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <vector>

#include "dslasso/rng.hpp"
#include "dslasso/types.hpp"

namespace testsupport {

using dslasso::MatrixXd;
using dslasso::RegressionData;
using dslasso::Restriction;
using dslasso::Rng;
using dslasso::VectorXd;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Monte Carlo estimate of P(chi^2_nu(delta2) <= x); independent of the
// series implementation (direct normal sums).
inline MeanSe mc_noncentral_cdf(double x, int nu, double delta2, std::size_t draws,
                                std::uint64_t seed) {
  Rng rng(seed);
  const double mu = std::sqrt(delta2);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    double s = 0.0;
    const double z0 = rng.normal() + mu;
    s += z0 * z0;
    for (int k = 1; k < nu; ++k) {
      const double z = rng.normal();
      s += z * z;
    }
    if (s <= x) ++hits;
  }
  MeanSe out;
  out.mean = static_cast<double>(hits) / draws;
  out.se = std::sqrt(out.mean * (1.0 - out.mean) / draws);
  return out;
}

// Monte Carlo estimate of E[chi^-2] or E[chi^-4] (optionally truncated at k);
// requires enough degrees of freedom for a finite variance.
inline MeanSe mc_inverse_moment(int nu, double delta2, int power, std::size_t draws,
                                std::uint64_t seed, double truncation = -1.0) {
  Rng rng(seed);
  const double mu = std::sqrt(delta2);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    double s = 0.0;
    const double z0 = rng.normal() + mu;
    s += z0 * z0;
    for (int k = 1; k < nu; ++k) {
      const double z = rng.normal();
      s += z * z;
    }
    double v = power == 2 ? 1.0 / s : 1.0 / (s * s);
    if (truncation >= 0.0 && s >= truncation) v = 0.0;
    sum += v;
    sumsq += v * v;
  }
  MeanSe out;
  out.mean = sum / draws;
  const double var = (sumsq / draws - out.mean * out.mean) / draws;
  out.se = std::sqrt(std::max(var, 0.0));
  return out;
}

// Kolmogorov-Smirnov distance between a sample and a CDF.
template <typename Cdf>
inline double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

inline MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline VectorXd random_vector(Eigen::Index n, Rng& rng) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

// n x p design with exactly orthonormal columns (Q factor of a Gaussian).
inline MatrixXd orthonormal_design(Eigen::Index n, Eigen::Index p, Rng& rng) {
  const MatrixXd g = random_matrix(n, p, rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, p);
  return q;
}

// random SPD matrix with eigenvalues bounded away from zero
inline MatrixXd random_spd(Eigen::Index p, Rng& rng) {
  const MatrixXd g = random_matrix(p, p, rng);
  return g * g.transpose() + 0.5 * static_cast<double>(p) * MatrixXd::Identity(p, p);
}

// full-rank q x p restriction with Gaussian entries
inline Restriction random_restriction(Eigen::Index q, Eigen::Index p, Rng& rng,
                                      bool random_h = true) {
  for (;;) {
    MatrixXd H = random_matrix(q, p, rng);
    VectorXd h = random_h ? random_vector(q, rng) : VectorXd::Zero(q);
    try {
      return Restriction::make(std::move(H), std::move(h));
    } catch (const dslasso::Error&) {
      // rank-deficient draw (measure zero); redraw
    }
  }
}

// Synthetic stand-in for the prostate study: n=97 rows, 8 predictors with a
// realistic correlation structure, truth violating the 3x8 restriction at a
// borderline level, and heavy-tailed noise so bootstrap resamples differ in
// residual scale.
inline RegressionData prostate_like(std::uint64_t seed = 99ULL,
                                    double violation_scale = 15.5, int n_violators = 5,
                                    double leverage_boost = 3.0, double noise_sd = 0.9) {
  const int n = 97, p = 8;
  Rng rng(seed);

  MatrixXd corr(p, p);
  corr.setIdentity();
  auto set = [&corr](int i, int j, double v) {
    corr(i, j) = v;
    corr(j, i) = v;
  };
  // lcavol lweight age lbph svi lcp gleason pgg45
  set(0, 2, 0.22);
  set(0, 4, 0.54);
  set(0, 5, 0.68);
  set(0, 6, 0.43);
  set(0, 7, 0.43);
  set(1, 3, 0.43);
  set(2, 3, 0.35);
  set(4, 5, 0.67);
  set(5, 6, 0.51);
  set(5, 7, 0.63);
  set(6, 7, 0.75);
  const MatrixXd L = MatrixXd(corr.llt().matrixL());

  MatrixXd X(n, p);
  const double scale[p] = {1.18, 0.43, 7.45, 1.45, 0.41, 1.40, 0.72, 28.2};
  const double shift[p] = {1.35, 3.63, 63.9, 0.10, 0.22, -0.18, 6.75, 24.4};
  for (int i = 0; i < n; ++i) {
    VectorXd z(p);
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    const VectorXd u = L * z;
    for (int j = 0; j < p; ++j) X(i, j) = shift[j] + scale[j] * u(j);
  }
  // svi is binary, gleason and pgg45 are discrete/bounded in the real data
  for (int i = 0; i < n; ++i) {
    X(i, 4) = X(i, 4) > 0.4 ? 1.0 : 0.0;
    X(i, 6) = std::clamp(std::round(X(i, 6)), 6.0, 9.0);
    X(i, 7) = std::clamp(std::round(X(i, 7) / 5.0) * 5.0, 0.0, 100.0);
  }

  // Truth: the bulk of the rows satisfy H beta = 0 exactly, while a handful
  // of rows follow a shifted coefficient vector that violates it. The
  // restriction then helps on most of the data but fails on the violating
  // rows, and how visible the violation is depends on which rows a resample
  // or training fold happens to hold.
  VectorXd beta(p);
  beta << 0.587, 0.454, -0.020, 0.107, 0.766, -0.105, 0.045, 0.005;
  MatrixXd H(3, p);
  H << -1, 3, 1, -1, 0, -1, 0, 0,
       -1, 1, 0, -1, 0, 1, 0, 0,
        1, 0, -1, 1, 0, 0, 1, 0;
  beta -= H.transpose() * (H * H.transpose()).ldlt().solve(H * beta);  // H beta = 0
  const VectorXd shift_dir =
      H.transpose() * (H * H.transpose()).ldlt().solve(
                          (VectorXd(3) << 0.30, -0.22, 0.26).finished());
  const VectorXd beta_violating = beta + violation_scale * shift_dir;

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<bool> violating(n, false);
  for (int i = 0; i < n_violators; ++i) violating[order[i]] = true;

  // violating rows sit at high-leverage positions, so their shifted mean
  // moves the fitted coefficients instead of just inflating the residuals
  const Eigen::RowVectorXd col_mean = X.colwise().mean();
  for (int i = 0; i < n; ++i)
    if (violating[i]) X.row(i) = col_mean + leverage_boost * (X.row(i) - col_mean);

  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y(i) = X.row(i).dot(violating[i] ? beta_violating : beta) + noise_sd * rng.normal();
  }
  RegressionData d = RegressionData::make(std::move(X), std::move(y));
  d.column_names = {"lcavol", "lweight", "age", "lbph", "svi", "lcp", "gleason", "pgg45"};
  d.response_name = "lpsa";
  return d;
}

}  // namespace testsupport
