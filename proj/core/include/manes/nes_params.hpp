#pragma once

#include <array>

namespace manes {

/// Single-stock log-Gaussian-mixture potential parameters, all annualized.
/// mu1, mu2 are drifts, sigma1, sigma2 volatilities, a the mixing weight of
/// component 2, T the horizon in years, h the Langevin noise amplitude.
struct NesParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double a = 0.5;
  double T = 1.0;
  double h = 0.1;

  /// Throws ConstraintViolation unless sigma1,sigma2,T,h > 0 and 0 < a < 1.
  void validate() const;
};

/// The squared ground state as a normalized 3-component Gaussian mixture.
/// Component k has weight w[k], mean mean[k] = mu_k T and variance
/// var[k] = sigma_k^2 T / 2; the cross term supplies component 3.
struct MixtureStationary {
  std::array<double, 3> weight{};
  std::array<double, 3> mean{};
  std::array<double, 3> variance{};
  double omega = 0.0;  // Omega = sum of unnormalized weights
  double c = 0.0;      // normalization constant, c^2 Omega = 2 sqrt(pi T)
  double log_c = 0.0;

  double pdf(double y) const;
  double logpdf(double y) const;
  double cdf(double y) const;
  double first_moment() const;
  double central_variance() const;
};

/// Midpoint split of a nearly symmetric parameter set: mu1 = eps_mu + mu,
/// mu2 = eps_mu - mu, sigma_{1,2}^2 = sigma^2 +- eps_sigma, a = 1/2 + eps_a.
/// B0 is the fictitious external field reproducing the linear-in-eps tilt.
struct SymmetricDecomposition {
  double mu = 0.0;
  double sigma = 0.0;
  double eps_mu = 0.0;
  double eps_sigma = 0.0;
  double eps_a = 0.0;
  double B0 = 0.0;
  bool linearization_ok = true;
};

/// Effective single-stock parameters after absorbing the quadratic
/// interaction at mean field m. v_hat is the additive log-weight constant.
struct RenormalizedParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double a = 0.5;
  double v_hat = 0.0;

  NesParams as_params(double h, double T) const;
};

}  // namespace manes
