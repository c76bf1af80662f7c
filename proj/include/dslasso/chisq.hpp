#pragma once

#include <optional>

#include "dslasso/errors.hpp"

namespace dslasso {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Central chi-square CDF with nu > 0 degrees of freedom.
double chisq_cdf(double x, double nu);

/// Central chi-square density.
double chisq_pdf(double x, double nu);

/// Lower-tail quantile: smallest x with CDF(x) >= prob.
double chisq_quantile(double prob, double nu);

/// Upper critical value: P(X > result) = alpha.
double chisq_upper_quantile(double alpha, double nu);

/// Noncentral chi-square CDF as the Poisson(delta2/2) mixture of central
/// CDFs with nu + 2r degrees of freedom. The series stops once the remaining
/// Poisson tail mass drops below 1e-12.
double noncentral_chisq_cdf(double x, int nu, double delta2);

enum class InvPower { Two, Four };  // E[chi^-2] vs E[chi^-4]

/// Poisson-mixture inverse moments of the noncentral chi-square with
/// nu_base + s degrees of freedom:
///   Two:  E[chi^-2] = E_r (nu-2+2r)^-1
///   Four: E[chi^-4] = E_r [(nu-2+2r)(nu-4+2r)]^-1
/// With a truncation point k, each term additionally carries the central CDF
/// factor H_{nu-2+2r}(k;0) (Two) or H_{nu-4+2r}(k;0) (Four), giving the
/// indicator-restricted expectations E[chi^-2 I(chi^2 < k)] etc.
/// Throws DivergentMoment unless nu > 2 (Two) / nu > 4 (Four).
double inv_moment(int nu_base, int s, InvPower power, double delta2,
                  std::optional<double> truncation = std::nullopt);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

/// F distribution CDF / upper critical value (small-sample test variant).
double f_cdf(double x, double d1, double d2);
double f_upper_quantile(double alpha, double d1, double d2);

}  // namespace dslasso
