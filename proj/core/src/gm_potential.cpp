#include "manes/gm_potential.hpp"

#include <algorithm>
#include <cmath>

#include "manes/errors.hpp"
#include "manes/numerics.hpp"

namespace manes {

MixtureStationary stationary_density(const NesParams& p) {
  p.validate();
  const double s1 = p.sigma1 * p.sigma1;
  const double s2 = p.sigma2 * p.sigma2;
  const double ssum = s1 + s2;
  const double dmu = p.mu1 - p.mu2;

  MixtureStationary out;
  const double n1 = (1.0 - p.a) * (1.0 - p.a) / p.sigma1;
  const double n2 = p.a * p.a / p.sigma2;
  const double n3 = 2.0 * p.a * (1.0 - p.a) / std::sqrt(0.5 * ssum) *
                    std::exp(-dmu * dmu * p.T / (2.0 * ssum));
  out.omega = n1 + n2 + n3;
  out.weight = {n1 / out.omega, n2 / out.omega, n3 / out.omega};
  out.mean = {p.mu1 * p.T, p.mu2 * p.T,
              (p.mu1 * s2 + p.mu2 * s1) / ssum * p.T};
  out.variance = {0.5 * s1 * p.T, 0.5 * s2 * p.T, s1 * s2 * p.T / ssum};
  out.log_c = 0.5 * (std::log(2.0) + 0.5 * std::log(kPi * p.T) - std::log(out.omega));
  out.c = std::exp(out.log_c);
  return out;
}

double log_psi0(const NesParams& p, double y) {
  const double l1 =
      std::log1p(-p.a) + norm_logpdf(y, p.mu1 * p.T, p.sigma1 * p.sigma1 * p.T);
  const double l2 =
      std::log(p.a) + norm_logpdf(y, p.mu2 * p.T, p.sigma2 * p.sigma2 * p.T);
  return stationary_density(p).log_c + log_sum_exp(l1, l2);
}

double potential_offset(const NesParams& p) {
  p.validate();
  const double smax = std::max(p.sigma1, p.sigma2) * std::sqrt(p.T);
  const double lo = std::min(p.mu1, p.mu2) * p.T - 8.0 * smax;
  const double hi = std::max(p.mu1, p.mu2) * p.T + 8.0 * smax;
  const int n = 4001;
  const double dy = (hi - lo) / (n - 1);
  int ibest = 0;
  double best = -1e300;
  for (int i = 0; i < n; ++i) {
    const double v = log_psi0(p, lo + i * dy);
    if (v > best) {
      best = v;
      ibest = i;
    }
  }
  const double a = lo + std::max(0, ibest - 1) * dy;
  const double b = lo + std::min(n - 1, ibest + 1) * dy;
  const double ystar =
      golden_min([&](double y) { return -log_psi0(p, y); }, a, b, 1e-12);
  return p.h * p.h * std::max(best, log_psi0(p, ystar));
}

double potential(const NesParams& p, double y) {
  return -p.h * p.h * log_psi0(p, y) + potential_offset(p);
}

double potential_deriv(const NesParams& p, double y) {
  const double v1 = p.sigma1 * p.sigma1 * p.T;
  const double v2 = p.sigma2 * p.sigma2 * p.T;
  const double l1 = std::log1p(-p.a) + norm_logpdf(y, p.mu1 * p.T, v1);
  const double l2 = std::log(p.a) + norm_logpdf(y, p.mu2 * p.T, v2);
  const double lse = log_sum_exp(l1, l2);
  const double r1 = std::exp(l1 - lse);
  const double r2 = std::exp(l2 - lse);
  return p.h * p.h *
         (r1 * (y - p.mu1 * p.T) / v1 + r2 * (y - p.mu2 * p.T) / v2);
}

bool is_symmetric(const NesParams& p, double tol) {
  const double s2 = 0.5 * (p.sigma1 * p.sigma1 + p.sigma2 * p.sigma2);
  const double mu = 0.5 * (p.mu1 - p.mu2);
  const double scale = std::max({std::fabs(mu), std::sqrt(s2), 1e-30});
  return std::fabs(p.mu1 + p.mu2) <= tol * scale &&
         std::fabs(p.sigma1 * p.sigma1 - p.sigma2 * p.sigma2) <= tol * s2 &&
         std::fabs(p.a - 0.5) <= tol;
}

SymmetricDecomposition symmetrize(const NesParams& p, double threshold) {
  p.validate();
  SymmetricDecomposition d;
  d.eps_mu = 0.5 * (p.mu1 + p.mu2);
  d.mu = 0.5 * (p.mu1 - p.mu2);
  const double s2 = 0.5 * (p.sigma1 * p.sigma1 + p.sigma2 * p.sigma2);
  d.sigma = std::sqrt(s2);
  d.eps_sigma = 0.5 * (p.sigma1 * p.sigma1 - p.sigma2 * p.sigma2);
  d.eps_a = p.a - 0.5;

  // Linear response of the potential tilt; exact in all three eps at fixed
  // (mu, sigma).  B0 > 0 pushes the equilibrium toward positive returns.
  const double h2 = p.h * p.h;
  const double r = d.mu * d.mu * p.T / s2;
  d.B0 = h2 / s2 * (1.0 - r) * d.eps_mu +
         h2 * d.mu / (2.0 * s2 * s2) * (r - 3.0) * d.eps_sigma -
         2.0 * d.mu * h2 / s2 * d.eps_a;

  const double scale_mu = std::max(std::fabs(d.mu), d.sigma);
  d.linearization_ok = std::fabs(d.eps_mu) <= threshold * scale_mu &&
                       std::fabs(d.eps_sigma) <= threshold * s2 &&
                       std::fabs(d.eps_a) <= threshold * 0.5;
  return d;
}

RenormalizedParams renormalize_with_field(const NesParams& p, double g,
                                          double m, double B) {
  p.validate();
  if (g < 0.0) throw ConstraintViolation("coupling g must be nonnegative");
  const double h2 = p.h * p.h;
  const double L = g * m + B;

  RenormalizedParams rp;
  double E[2], D[2];
  const double mu[2] = {p.mu1, p.mu2};
  const double s2[2] = {p.sigma1 * p.sigma1, p.sigma2 * p.sigma2};
  double mub[2], sb[2];
  for (int k = 0; k < 2; ++k) {
    D[k] = h2 + g * s2[k] * p.T;
    const double sb2 = h2 * s2[k] / D[k];
    sb[k] = std::sqrt(sb2);
    mub[k] = (h2 * mu[k] + s2[k] * L) / D[k];
    E[k] = 0.5 * p.T * (mub[k] * mub[k] / sb2 - mu[k] * mu[k] / s2[k]);
  }
  const double lw1 = std::log1p(-p.a) + 0.5 * std::log(h2 / D[0]) + E[0];
  const double lw2 = std::log(p.a) + 0.5 * std::log(h2 / D[1]) + E[1];
  rp.v_hat = log_sum_exp(lw1, lw2);
  rp.a = std::exp(lw2 - rp.v_hat);
  rp.mu1 = mub[0];
  rp.mu2 = mub[1];
  rp.sigma1 = sb[0];
  rp.sigma2 = sb[1];
  return rp;
}

RenormalizedParams renormalize(const NesParams& p, double g, double m) {
  return renormalize_with_field(p, g, m, 0.0);
}

NesParams invert_renormalization(const RenormalizedParams& rp, double g,
                                 double m, double h, double T) {
  const double h2 = h * h;
  const double sb2[2] = {rp.sigma1 * rp.sigma1, rp.sigma2 * rp.sigma2};
  const double mub[2] = {rp.mu1, rp.mu2};
  double mu[2], s2[2], E[2], D[2];
  for (int k = 0; k < 2; ++k) {
    const double denom = 1.0 - g / h2 * sb2[k] * T;
    if (!(denom > 0.0))
      throw ConstraintViolation(
          "coupling exceeds h^2/(sigma_bar^2 T); bare volatility not real");
    s2[k] = sb2[k] / denom;
    D[k] = h2 + g * s2[k] * T;
    mu[k] = (mub[k] * D[k] - g * s2[k] * m) / h2;
    E[k] = 0.5 * T * (mub[k] * mub[k] / sb2[k] - mu[k] * mu[k] / s2[k]);
  }
  const double logit_abar = std::log(rp.a) - std::log1p(-rp.a);
  const double logit_a =
      logit_abar - (E[1] - E[0]) - 0.5 * std::log(D[0] / D[1]);
  NesParams p;
  p.mu1 = mu[0];
  p.mu2 = mu[1];
  p.sigma1 = std::sqrt(s2[0]);
  p.sigma2 = std::sqrt(s2[1]);
  p.a = 1.0 / (1.0 + std::exp(-logit_a));
  p.T = T;
  p.h = h;
  p.validate();
  return p;
}

}  // namespace manes
