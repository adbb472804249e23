#include "manes/nes_params.hpp"

#include <cmath>

#include "manes/errors.hpp"
#include "manes/numerics.hpp"

namespace manes {

void NesParams::validate() const {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
    throw ConstraintViolation("sigma1 and sigma2 must be positive");
  if (!(a > 0.0) || !(a < 1.0))
    throw ConstraintViolation("mixing weight a must lie in (0,1)");
  if (!(T > 0.0)) throw ConstraintViolation("horizon T must be positive");
  if (!(h > 0.0)) throw ConstraintViolation("noise amplitude h must be positive");
}

double MixtureStationary::pdf(double y) const {
  return std::exp(logpdf(y));
}

double MixtureStationary::logpdf(double y) const {
  double l = std::log(weight[0]) + norm_logpdf(y, mean[0], variance[0]);
  for (int k = 1; k < 3; ++k)
    l = log_sum_exp(l, std::log(weight[k]) + norm_logpdf(y, mean[k], variance[k]));
  return l;
}

double MixtureStationary::cdf(double y) const {
  double s = 0.0;
  for (int k = 0; k < 3; ++k)
    s += weight[k] * norm_cdf((y - mean[k]) / std::sqrt(variance[k]));
  return s;
}

double MixtureStationary::first_moment() const {
  return weight[0] * mean[0] + weight[1] * mean[1] + weight[2] * mean[2];
}

double MixtureStationary::central_variance() const {
  const double m = first_moment();
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = mean[k] - m;
    s += weight[k] * (variance[k] + d * d);
  }
  return s;
}

NesParams RenormalizedParams::as_params(double h, double T) const {
  NesParams p;
  p.mu1 = mu1;
  p.mu2 = mu2;
  p.sigma1 = sigma1;
  p.sigma2 = sigma2;
  p.a = a;
  p.T = T;
  p.h = h;
  return p;
}

}  // namespace manes
