#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace manes {

inline constexpr double kPi = 3.14159265358979323846;

inline double log_sum_exp(double a, double b) {
  const double m = a > b ? a : b;
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double norm_logpdf(double y, double mean, double var) {
  const double d = y - mean;
  return -0.5 * (std::log(2.0 * kPi * var) + d * d / var);
}

inline double norm_pdf(double y, double mean, double var) {
  return std::exp(norm_logpdf(y, mean, var));
}

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// log(cosh x), overflow-safe for large |x|.
inline double log_cosh(double x) {
  const double ax = std::fabs(x);
  if (ax > 30.0) return ax - std::log(2.0) + std::log1p(std::exp(-2.0 * ax));
  return std::log(std::cosh(ax));
}

/// log(cosh x + c) for c >= 0, overflow-safe.
inline double log_cosh_plus(double x, double c) {
  const double ax = std::fabs(x);
  if (ax > 30.0) {
    const double e = std::exp(-ax);
    return ax - std::log(2.0) + std::log1p(e * (e + 2.0 * c));
  }
  return std::log(std::cosh(ax) + c);
}

/// sinh(x) / (cosh(x) + c) for c >= 0; saturates to +-1 as |x| grows.
inline double tanh_shifted(double x, double c) {
  const double ax = std::fabs(x);
  const double s = x < 0 ? -1.0 : 1.0;
  if (ax > 30.0) {
    const double e = std::exp(-ax);
    return s * (1.0 - e * e) / (1.0 + e * (e + 2.0 * c));
  }
  return std::sinh(x) / (std::cosh(x) + c);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Bisection; f(lo) and f(hi) must bracket a sign change.  Refines to
/// floating-point resolution of the interval.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_lo, double f_hi);

/// Golden-section minimum of a unimodal function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol);

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Bounded Nelder-Mead: every candidate vertex is clamped into [lo, hi].
/// Deterministic for fixed inputs.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<double>& step,
    const std::vector<double>& lo, const std::vector<double>& hi,
    int max_evals, double f_tol);

}  // namespace manes
