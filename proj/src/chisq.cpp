#include "dslasso/chisq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dslasso {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr double kPoissonTailTol = 1e-12;

// P(a, x) by series expansion; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by Lentz continued fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// log of the Poisson(lambda) pmf at r.
double log_poisson_pmf(double r, double lambda) {
  return r * std::log(lambda) - lambda - std::lgamma(r + 1.0);
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0) throw InvalidArgument("gamma_p needs a > 0");
  if (x < 0.0) throw InvalidArgument("gamma_p needs x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chisq_cdf(double x, double nu) {
  if (nu <= 0.0) throw InvalidArgument("chisq_cdf needs nu > 0");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * nu, 0.5 * x);
}

double chisq_pdf(double x, double nu) {
  if (x <= 0.0) return 0.0;
  const double half = 0.5 * nu;
  return 0.5 * std::exp((half - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(half));
}

double chisq_quantile(double prob, double nu) {
  if (!(prob >= 0.0 && prob < 1.0)) throw InvalidArgument("chisq_quantile needs prob in [0,1)");
  if (prob == 0.0) return 0.0;
  double lo = 0.0;
  double hi = nu + 10.0 * std::sqrt(2.0 * nu) + 10.0;
  while (chisq_cdf(hi, nu) < prob) hi *= 2.0;
  // bisect into the right neighborhood, then polish with Newton
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chisq_cdf(mid, nu) < prob)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-8 * (1.0 + hi)) break;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double f = chisq_cdf(x, nu) - prob;
    const double d = chisq_pdf(x, nu);
    if (d <= 0.0) break;
    const double step = f / d;
    x -= step;
    if (x <= lo || x >= hi) {
      x = 0.5 * (lo + hi);
      break;
    }
    if (std::abs(step) < 1e-14 * (1.0 + x)) break;
  }
  return x;
}

double chisq_upper_quantile(double alpha, double nu) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("chisq_upper_quantile needs alpha in (0,1)");
  return chisq_quantile(1.0 - alpha, nu);
}

double noncentral_chisq_cdf(double x, int nu, double delta2) {
  if (nu < 1) throw InvalidArgument("noncentral_chisq_cdf needs nu >= 1");
  if (delta2 < 0.0) throw InvalidArgument("noncentral_chisq_cdf needs delta2 >= 0");
  if (x <= 0.0) return 0.0;

  const double a0 = 0.5 * nu;
  const double xh = 0.5 * x;
  if (delta2 == 0.0) return gamma_p(a0, xh);

  const double lambda = 0.5 * delta2;
  // Central CDF at nu + 2r, advanced by P(a+1, x) = P(a, x) - x^a e^-x / Gamma(a+1).
  double central = gamma_p(a0, xh);
  double step = std::exp(a0 * std::log(xh) - xh - std::lgamma(a0 + 1.0));
  double sum = 0.0;
  double cum_weight = 0.0;
  double log_w = -lambda;
  const std::int64_t r_max =
      static_cast<std::int64_t>(lambda + 12.0 * std::sqrt(lambda + 1.0) + 200.0);
  for (std::int64_t r = 0; r <= r_max; ++r) {
    const double w = std::exp(log_w);
    sum += w * central;
    cum_weight += w;
    if (1.0 - cum_weight < kPoissonTailTol) break;
    log_w += std::log(lambda) - std::log(static_cast<double>(r + 1));
    central -= step;
    if (central < 0.0) central = 0.0;
    // the subtraction recurrence bottoms out at rounding noise; refresh the
    // tiny tail with a direct evaluation so it underflows cleanly
    if (central < 1e-12)
      central = gamma_p(a0 + static_cast<double>(r) + 1.0, xh);
    step *= xh / (a0 + static_cast<double>(r) + 1.0);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double inv_moment(int nu_base, int s, InvPower power, double delta2,
                  std::optional<double> truncation) {
  const int nu = nu_base + s;
  if (power == InvPower::Two && nu <= 2)
    throw DivergentMoment("E[chi^-2] diverges for nu = " + std::to_string(nu));
  if (power == InvPower::Four && nu <= 4)
    throw DivergentMoment("E[chi^-4] diverges for nu = " + std::to_string(nu));
  if (delta2 < 0.0) throw InvalidArgument("inv_moment needs delta2 >= 0");
  if (truncation && *truncation < 0.0) throw InvalidArgument("truncation point must be >= 0");
  if (truncation && *truncation == 0.0) return 0.0;

  const double lambda = 0.5 * delta2;
  // CDF degrees for the indicator factor: nu-2+2r (Two), nu-4+2r (Four).
  const int cdf_dof0 = power == InvPower::Two ? nu - 2 : nu - 4;

  double central = 0.0, step = 0.0;
  if (truncation) {
    const double kh = 0.5 * *truncation;
    const double a0 = 0.5 * cdf_dof0;
    central = gamma_p(a0, kh);
    step = std::exp(a0 * std::log(kh) - kh - std::lgamma(a0 + 1.0));
  }

  double sum = 0.0;
  double cum_weight = 0.0;
  double log_w = -lambda;
  const std::int64_t r_max =
      static_cast<std::int64_t>(lambda + 12.0 * std::sqrt(lambda + 1.0) + 200.0);
  for (std::int64_t r = 0;; ++r) {
    const double w = lambda == 0.0 && r > 0 ? 0.0 : std::exp(log_w);
    const double d1 = static_cast<double>(nu - 2 + 2 * r);
    double term = 1.0 / d1;
    if (power == InvPower::Four) term /= static_cast<double>(nu - 4 + 2 * r);
    if (truncation) term *= central;
    sum += w * term;
    cum_weight += w;
    if (1.0 - cum_weight < kPoissonTailTol || lambda == 0.0 || r >= r_max) break;
    log_w += std::log(lambda) - std::log(static_cast<double>(r + 1));
    if (truncation) {
      const double kh = 0.5 * *truncation;
      const double a0 = 0.5 * cdf_dof0;
      central -= step;
      if (central < 0.0) central = 0.0;
      if (central < 1e-12)
        central = gamma_p(a0 + static_cast<double>(r) + 1.0, kh);
      step *= kh / (a0 + static_cast<double>(r) + 1.0);
    }
  }
  return sum;
}

double beta_inc(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw InvalidArgument("beta_inc needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const bool swapped = x > (a + 1.0) / (a + b + 2.0);
  if (swapped) {
    std::swap(a, b);
    x = 1.0 - x;
  }
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
               b * std::log(1.0 - x)) /
      a;
  // Lentz evaluation of the standard continued fraction.
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  const double result = front * h;
  return swapped ? 1.0 - result : result;
}

double f_cdf(double x, double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0) throw InvalidArgument("f_cdf needs positive dof");
  if (x <= 0.0) return 0.0;
  return beta_inc(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2));
}

double f_upper_quantile(double alpha, double d1, double d2) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("f_upper_quantile needs alpha in (0,1)");
  const double p = 1.0 - alpha;
  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, d1, d2) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f_cdf(mid, d1, d2) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dslasso
