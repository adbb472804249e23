#include "manes/micro_flow.hpp"

#include <cmath>

#include "manes/errors.hpp"
#include "manes/numerics.hpp"

namespace manes {

void FlowParams::validate() const {
  if (phi < 0.0 || lambda < 0.0 || kappa < 0.0)
    throw ConstraintViolation("flow coefficients must be nonnegative");
  if (!(eta > 0.0)) throw ConstraintViolation("impact magnitude eta must be positive");
  if (!(beta_impact > 0.0))
    throw ConstraintViolation("impact sharpness beta must be positive");
}

double soft_abs(double beta_impact, double z) {
  if (!(beta_impact > 0.0))
    throw ConstraintViolation("impact sharpness beta must be positive");
  return log_cosh(beta_impact * z) / beta_impact;
}

double flow_rate(const FlowParams& fp, double y, double mean_y) {
  return fp.phi * y + fp.lambda * y * y * y + fp.kappa * mean_y;
}

double impact(const FlowParams& fp, double a) {
  const double b = fp.b();
  return -fp.eta *
         (soft_abs(fp.beta_impact, a - b) - soft_abs(fp.beta_impact, -b));
}

double combined_drift(const FlowParams& fp, double y, double mean_y) {
  const double a = flow_rate(fp, y, mean_y);
  return a + impact(fp, a);
}

DriftCoeffs drift_coeffs(const FlowParams& fp) {
  fp.validate();
  const double bb = fp.beta_impact * fp.b();
  const double lin = 1.0 + fp.eta * bb * (1.0 + bb * bb / 3.0);
  DriftCoeffs dc;
  dc.xi = (fp.phi + fp.kappa) * lin;
  dc.g = fp.kappa * lin;
  dc.rho = -0.5 * fp.beta_impact * fp.eta * (1.0 + bb * bb) * fp.phi * fp.phi;
  dc.zeta = fp.eta * bb * fp.beta_impact * fp.beta_impact * fp.phi * fp.phi *
                fp.phi / 3.0 +
            fp.lambda * lin;
  return dc;
}

DriftCoeffs drift_coeffs_exact(const FlowParams& fp) {
  fp.validate();
  const double bb = fp.beta_impact * fp.b();
  const double t = std::tanh(bb);
  const double s = 1.0 - t * t;  // sech^2
  const double p = fp.phi + fp.kappa;
  DriftCoeffs dc;
  dc.xi = p * (1.0 + fp.eta * t);
  dc.g = fp.kappa * (1.0 + fp.eta * t);
  dc.rho = -0.5 * fp.eta * fp.beta_impact * s * p * p;
  dc.zeta = fp.lambda * (1.0 + fp.eta * t) -
            fp.eta * fp.beta_impact * fp.beta_impact / 3.0 * s * t * p * p * p;
  return dc;
}

}  // namespace manes
