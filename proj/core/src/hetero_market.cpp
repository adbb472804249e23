#include "manes/hetero_market.hpp"

#include <cmath>
#include <string>

#include "manes/errors.hpp"
#include "manes/numerics.hpp"

namespace manes {

void HeterogeneousMarket::validate() const {
  if (assets.empty()) throw ConstraintViolation("market has no assets");
  if (g < 0.0) throw ConstraintViolation("coupling g must be nonnegative");
  if (!(h > 0.0) || !(T > 0.0))
    throw ConstraintViolation("h and T must be positive");
  for (const AssetParams& ap : assets)
    if (!(ap.sigma > 0.0))
      throw ConstraintViolation("asset volatilities must be positive");
}

namespace {

double overlap_b(const AssetParams& ap, double h2, double D, double T) {
  return std::exp(-h2 * ap.mu * ap.mu * T / (ap.sigma * ap.sigma * D));
}

/// Limit A_i/g at g = 0; finite, sets the uncoupled susceptibility.
double a_over_g_zero_coupling(const AssetParams& ap, double h2, double T) {
  const double s2 = ap.sigma * ap.sigma;
  const double b0 = std::exp(-ap.mu * ap.mu * T / s2);
  return s2 * T / h2 + 2.0 * ap.mu * ap.mu * T * T / (h2 * (1.0 + b0));
}

}  // namespace

std::vector<double> response_coefficients(const HeterogeneousMarket& mkt) {
  mkt.validate();
  const double h2 = mkt.h * mkt.h;
  std::vector<double> A(mkt.assets.size());
  for (std::size_t i = 0; i < mkt.assets.size(); ++i) {
    const AssetParams& ap = mkt.assets[i];
    const double s2 = ap.sigma * ap.sigma;
    const double D = h2 + mkt.g * s2 * mkt.T;
    const double b = overlap_b(ap, h2, D, mkt.T);
    A[i] = mkt.g * s2 * mkt.T / D +
           2.0 * mkt.g * h2 * ap.mu * ap.mu * mkt.T * mkt.T / (D * D * (1.0 + b));
  }
  return A;
}

LinearResponse linear_response(const HeterogeneousMarket& mkt) {
  mkt.validate();
  const int n = mkt.size();
  const double h2 = mkt.h * mkt.h;
  LinearResponse lr;
  lr.n = n;
  lr.A = response_coefficients(mkt);
  double sum = 0.0;
  for (double a : lr.A) sum += a;
  lr.mean_A = sum / n;
  if (1.0 - lr.mean_A < 1e-8)
    throw NearSingular("1 - <A> below 1e-8; critical regime");

  lr.G.assign(static_cast<std::size_t>(n) * n, 0.0);
  lr.G_inv.assign(static_cast<std::size_t>(n) * n, 0.0);
  lr.G_inv_large_n.assign(static_cast<std::size_t>(n) * n, 0.0);
  lr.chi.assign(static_cast<std::size_t>(n) * n, 0.0);
  lr.C.assign(static_cast<std::size_t>(n) * n, 0.0);

  double s = 0.0;  // Sherman-Morrison scalar for the exclude-self operator
  for (double a : lr.A) s += a / (n + a);
  if (1.0 - s < 1e-8) throw NearSingular("Sherman-Morrison denominator vanishes");

  const bool coupled = mkt.g > 0.0;
  for (int i = 0; i < n; ++i) {
    const double Ai = lr.A[i];
    const double chi_diag =
        coupled ? Ai / mkt.g : a_over_g_zero_coupling(mkt.assets[i], h2, mkt.T);
    for (int j = 0; j < n; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * n + j;
      const double Aj = lr.A[j];
      lr.G[ij] = (i == j ? 1.0 + Ai / n : 0.0) - Ai / n;
      lr.G_inv[ij] = (i == j ? n / (n + Ai) : 0.0) +
                     Ai / (n + Ai) * (n / (n + Aj)) / (1.0 - s);
      lr.G_inv_large_n[ij] =
          (i == j ? 1.0 : 0.0) + Ai / ((1.0 - lr.mean_A) * n);
      if (i == j) {
        lr.chi[ij] = chi_diag;
        lr.C[ij] = 0.5 * h2 * chi_diag;
      } else if (coupled) {
        lr.chi[ij] = Ai * Aj / (mkt.g * (1.0 - lr.mean_A) * n);
        lr.C[ij] = 0.5 * h2 * lr.chi[ij];
      }
    }
  }
  return lr;
}

std::vector<double> solve_local_mean_fields(const HeterogeneousMarket& mkt) {
  mkt.validate();
  const int n = mkt.size();
  const double h2 = mkt.h * mkt.h;

  auto rhs = [&](const std::vector<double>& m, std::vector<double>& out) {
    double mbar = 0.0;
    for (double v : m) mbar += v;
    mbar /= n;
    for (int i = 0; i < n; ++i) {
      const AssetParams& ap = mkt.assets[i];
      const double s2 = ap.sigma * ap.sigma;
      const double D = h2 + mkt.g * s2 * mkt.T;
      const double L = mkt.g * mbar + ap.B;
      const double b = overlap_b(ap, h2, D, mkt.T);
      const double muT = ap.mu * mkt.T;
      out[i] = s2 * mkt.T * L / D +
               h2 * muT / D * tanh_shifted(2.0 * muT * L / D, b);
    }
  };

  std::vector<double> m(n, 0.0), r(n);
  for (int it = 0; it < 10000; ++it) {
    rhs(m, r);
    double res = 0.0;
    for (int i = 0; i < n; ++i) res = std::max(res, std::fabs(m[i] - r[i]));
    if (res < 1e-10) return m;
    for (int i = 0; i < n; ++i) m[i] = 0.5 * m[i] + 0.5 * r[i];
  }
  rhs(m, r);
  double res = 0.0;
  for (int i = 0; i < n; ++i) res = std::max(res, std::fabs(m[i] - r[i]));
  throw NonConvergence("local mean fields stalled, residual " +
                       std::to_string(res));
}

FluctuationReport fluctuation_response_check(const HeterogeneousMarket& mkt) {
  mkt.validate();
  const int n = mkt.size();
  for (const AssetParams& ap : mkt.assets)
    if (std::fabs(ap.mu - mkt.assets[0].mu) > 1e-12 ||
        std::fabs(ap.sigma - mkt.assets[0].sigma) > 1e-12)
      throw ConstraintViolation("homogeneous parameters required");

  const double h2 = mkt.h * mkt.h;
  FluctuationReport rep;
  const std::vector<double> Av = response_coefficients(mkt);
  const double A = Av[0];
  rep.A = A;
  if (mkt.g > 0.0) {
    if (1.0 - A < 1e-8) throw NearSingular("1 - A below 1e-8");
    rep.mean_cov_from_A =
        h2 / (2.0 * mkt.g * n) * (A * A / (1.0 - A) + A);
    rep.mean_cov_from_chi = h2 / (2.0 * n) * (A / (mkt.g * (1.0 - A)));
    rep.mean_cov_matrix =
        (n * (h2 / (2.0 * mkt.g)) * A +
         static_cast<double>(n) * (n - 1) * (h2 / (2.0 * mkt.g * n)) * A * A /
             (1.0 - A)) /
        (static_cast<double>(n) * n);
    rep.sigma_M = mkt.h / std::sqrt(mkt.T) * std::sqrt(A / (2.0 * mkt.g));
    rep.rho_M = A / (n * (1.0 - A));
  } else {
    const double chi0 = a_over_g_zero_coupling(mkt.assets[0], h2, mkt.T);
    rep.sigma_M = std::sqrt(0.5 * h2 * chi0 / mkt.T);
    rep.rho_M = 0.0;
  }
  rep.rho_M_proxy = rep.rho_M + 1.0 / n;
  return rep;
}

double coupling_from_moments(int N, double rho_M, double sigma_M, double h,
                             double T) {
  if (N < 2 || !(sigma_M > 0.0) || !(T > 0.0) || !(h > 0.0) || rho_M < 0.0)
    throw ConstraintViolation("invalid moment inputs");
  const double A = N * rho_M / (1.0 + N * rho_M);
  return h * h * A / (2.0 * sigma_M * sigma_M * T);
}

}  // namespace manes
