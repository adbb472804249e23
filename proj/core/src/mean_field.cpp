#include "manes/mean_field.hpp"

#include <algorithm>
#include <cmath>

#include "manes/errors.hpp"
#include "manes/gm_potential.hpp"
#include "manes/numerics.hpp"

namespace manes {

void MarketCoupling::validate() const {
  if (g < 0.0) throw ConstraintViolation("coupling g must be nonnegative");
  if (N < 2) throw ConstraintViolation("asset count N must be at least 2");
}

double log_partition(const NesParams& p, double g, double m, double B) {
  const RenormalizedParams rp = renormalize_with_field(p, g, m, B);
  const MixtureStationary sd = stationary_density(rp.as_params(p.h, p.T));
  return 2.0 * rp.v_hat + std::log(sd.omega);
}

namespace {

double sech(double x) {
  const double e = std::exp(-std::fabs(x));
  return 2.0 * e / (1.0 + e * e);
}

}  // namespace

double partition_function(const NesParams& p, double g, double m) {
  if (is_symmetric(p) && g > 0.0) {
    const SymmetricDecomposition d = symmetrize(p);
    const double h2 = p.h * p.h;
    const double s2 = d.sigma * d.sigma;
    const double D = h2 + g * s2 * p.T;
    const double muT = d.mu * p.T;
    const double arg = g * muT * m / D;
    const double b = std::exp(-h2 * muT * d.mu / (s2 * D));
    const double v_hat_s = g * m * m / (2.0 * h2) -
                           g * (m * m + muT * muT) / (2.0 * D) +
                           log_cosh(arg) + 0.5 * std::log(h2 / D);
    const double sh = sech(arg);
    return std::exp(2.0 * v_hat_s - std::log(d.sigma) +
                    std::log1p(-0.5 * (1.0 - b) * sh * sh));
  }
  return std::exp(log_partition(p, g, m, 0.0));
}

double tilted_mean(const NesParams& p, double g, double m, double B) {
  const RenormalizedParams rp = renormalize_with_field(p, g, m, B);
  return stationary_density(rp.as_params(p.h, p.T)).first_moment();
}

double log_partition_deriv_m(const NesParams& p, double g, double m, double B) {
  return 2.0 * g / (p.h * p.h) * tilted_mean(p, g, m, B);
}

double self_consistency_rhs(const NesParams& p, double g, double m, double B) {
  if (is_symmetric(p)) {
    const SymmetricDecomposition d = symmetrize(p);
    const double h2 = p.h * p.h;
    const double s2 = d.sigma * d.sigma;
    const double D = h2 + g * s2 * p.T;
    const double muT = d.mu * p.T;
    const double b = std::exp(-h2 * muT * d.mu / (s2 * D));
    const double Q = 2.0 * muT * (g * m + B) / D;
    return s2 * p.T * B / h2 + muT * tanh_shifted(Q, b);
  }
  return tilted_mean(p, g, m, B);
}

double free_energy(const NesParams& p, double g, double m, double B) {
  return -0.5 * p.h * p.h * log_partition(p, g, m, B) + 0.5 * g * m * m;
}

double free_energy_curvature(const NesParams& p, double g, double m, double B) {
  const RenormalizedParams rp = renormalize_with_field(p, g, m, B);
  const double var = stationary_density(rp.as_params(p.h, p.T)).central_variance();
  return g * (1.0 - 2.0 * g / (p.h * p.h) * var);
}

SelfConsistencyResult solve_self_consistency(const NesParams& p, double g,
                                             double B) {
  p.validate();
  if (g < 0.0) throw ConstraintViolation("coupling g must be nonnegative");
  const double smax = std::max(p.sigma1, p.sigma2);
  const double m_max = std::max(std::fabs(p.mu1), std::fabs(p.mu2)) * p.T +
                       10.0 * smax * std::sqrt(p.T) +
                       std::fabs(B) * smax * smax * p.T / (p.h * p.h);
  auto f = [&](double m) { return m - self_consistency_rhs(p, g, m, B); };

  const int n = 2001;
  const double dm = 2.0 * m_max / (n - 1);
  std::vector<double> fv(n);
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) fv[i] = f(-m_max + i * dm);
  for (int i = 0; i < n; ++i) {
    const double mi = -m_max + i * dm;
    if (fv[i] == 0.0) roots.push_back(mi);
    if (i + 1 < n && fv[i] * fv[i + 1] < 0.0)
      roots.push_back(bisect(f, mi, mi + dm, fv[i], fv[i + 1]));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              roots.end());
  if (roots.empty()) throw NonConvergence("no self-consistency root located");

  double m_ref = roots[0];
  for (double r : roots)
    if (std::fabs(r) < std::fabs(m_ref)) m_ref = r;
  const double f_ref = free_energy(p, g, m_ref, B);

  SelfConsistencyResult out;
  for (double r : roots) {
    EquilibriumRoot root;
    root.m = r;
    root.free_energy = free_energy(p, g, r, B) - f_ref;
    root.stability = free_energy_curvature(p, g, r, B) < 0.0
                         ? Stability::Unstable
                         : Stability::Stable;
    out.roots.push_back(root);
  }
  return out;
}

}  // namespace manes
