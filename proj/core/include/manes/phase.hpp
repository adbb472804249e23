#pragma once

#include <string>
#include <vector>

#include "manes/mean_field.hpp"
#include "manes/nes_params.hpp"

namespace manes {

struct CriticalPoint {
  double h_c = 0.0;
  double b = 0.0;  // Gaussian overlap factor at the critical point
};

/// Solves h^2 = 2 g mu^2 T^2 / (1 + b(h)) - g sigma^2 T by damped fixed-point
/// iteration seeded at b = 0.  Throws NonCritical when no real solution.
CriticalPoint critical_volatility(double mu, double sigma, double T, double g);

CriticalPoint critical_volatility(const NesParams& p_sym, double g);

struct BifurcationPoint {
  double h = 0.0;
  SelfConsistencyResult result;
  bool ok = true;
  std::string error;
};

/// Root structure per grid volatility; failures recorded, sweep continues.
std::vector<BifurcationPoint> bifurcation_sweep(const NesParams& p_sym,
                                                double g,
                                                const std::vector<double>& h_grid);

struct BetaFit {
  double beta = 0.0;
  double r2 = 0.0;
  double intercept = 0.0;     // log-log intercept of the positive branch
  double closed_coeff = 0.0;  // K in m^2 = K (h_c^2 - h^2) at the critical point
  int n_points = 0;
};

/// Log-log slope of the positive branch over h in [0.9 h_c, 0.999 h_c].
/// Throws InsufficientBranch with fewer than 5 usable points.
BetaFit beta_exponent(const NesParams& p_sym, double g);

/// Closed-form specific-heat jump at h_c; the transition is second order so
/// the jump is finite and m itself is continuous.
double specific_heat_jump(const NesParams& p_sym, double g);

/// Equilibrium response dm/dB above the transition.  The overlap factor is
/// evaluated at the ambient h, which makes this the exact linearization of
/// the fixed-point equation.  Throws CriticalDivergence too close to h_c.
double susceptibility(const NesParams& p_sym, double g, double h);

}  // namespace manes
