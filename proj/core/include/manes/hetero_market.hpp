#pragma once

#include <vector>

#include "manes/nes_params.hpp"

namespace manes {

/// Per-asset symmetric potential (drift +-mu, volatility sigma) plus an
/// individual external field B.
struct AssetParams {
  double mu = 0.0;
  double sigma = 0.0;
  double B = 0.0;
};

struct HeterogeneousMarket {
  std::vector<AssetParams> assets;
  double g = 0.0;
  double h = 0.1;
  double T = 1.0;

  int size() const { return static_cast<int>(assets.size()); }
  void validate() const;
};

/// Row-major square matrices; N up to a few thousand is fine.
struct LinearResponse {
  int n = 0;
  std::vector<double> A;               // per-asset linearization slope
  double mean_A = 0.0;
  std::vector<double> G;               // exclude-self response operator
  std::vector<double> G_inv;           // exact Sherman-Morrison inverse
  std::vector<double> G_inv_large_n;   // rank-one large-N form
  std::vector<double> chi;             // dm_i/dB_j, symmetric
  std::vector<double> C;               // log-return covariance, rank-one off-diagonal
};

/// Slope of the per-asset fixed-point map at zero field, with the overlap
/// factor at ambient h (exact linearization, cf. the homogeneous chi).
std::vector<double> response_coefficients(const HeterogeneousMarket& mkt);

/// Throws NearSingular when 1 - <A> < 1e-8 (linear response invalid).
LinearResponse linear_response(const HeterogeneousMarket& mkt);

/// Damped fixed-point solve of the coupled local mean fields, include-self
/// market mean.  Residual < 1e-10 per asset or NonConvergence.
std::vector<double> solve_local_mean_fields(const HeterogeneousMarket& mkt);

struct FluctuationReport {
  double A = 0.0;
  double mean_cov_from_A = 0.0;    // covariance route
  double mean_cov_from_chi = 0.0;  // susceptibility route, identical algebra
  double mean_cov_matrix = 0.0;    // literal matrix average, O(1/N) apart
  double sigma_M = 0.0;            // annualized mean single-stock volatility
  double rho_M = 0.0;              // mean pairwise correlation
  double rho_M_proxy = 0.0;        // index-variance estimate, rho_M + 1/N
};

/// Homogeneous parameters required.
FluctuationReport fluctuation_response_check(const HeterogeneousMarket& mkt);

/// Inversion of the moment relations: A = N rho / (1 + N rho), then
/// g = h^2 A / (2 sigma_M^2 T).
double coupling_from_moments(int N, double rho_M, double sigma_M, double h,
                             double T);

}  // namespace manes
