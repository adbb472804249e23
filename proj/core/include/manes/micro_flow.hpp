#pragma once

namespace manes {

/// Investor flow and price-impact coefficients.  b() = a_hat - abar_tau is
/// the headroom of the saturation threshold over prior cumulative inflows.
struct FlowParams {
  double phi = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;
  double eta = 1.0;
  double beta_impact = 1.0;
  double a_hat = 0.0;
  double abar_tau = 0.0;
  double theta = 0.0;

  double b() const { return a_hat - abar_tau; }
  void validate() const;
};

/// Quartic drift expansion coefficients; g multiplies the market mean.
struct DriftCoeffs {
  double xi = 0.0;
  double rho = 0.0;
  double zeta = 0.0;
  double g = 0.0;
};

/// H_beta(z) = (1/beta) log cosh(beta z); smooth |z| with gap log2/beta.
double soft_abs(double beta_impact, double z);

/// phi y + lambda y^3 + kappa mean_y.
double flow_rate(const FlowParams& fp, double y, double mean_y);

/// f(a) = -eta (H(a - b) - H(-b)); zero at 0, peak eta H(b) at a = b.
double impact(const FlowParams& fp, double a);

/// flow plus its own impact, the self-interaction drift of the return.
double combined_drift(const FlowParams& fp, double y, double mean_y);

/// Coefficients from the polynomial-in-beta*b approximation of the impact
/// expansion; keeps the historical quartic-term sign.
DriftCoeffs drift_coeffs(const FlowParams& fp);

/// Exact Taylor coefficients of y -> combined_drift(y, y) at 0, with the
/// mean coefficient from the kappa channel.
DriftCoeffs drift_coeffs_exact(const FlowParams& fp);

}  // namespace manes
