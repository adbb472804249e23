#pragma once

#include <vector>

#include "manes/nes_params.hpp"

namespace manes {

/// Curie-Weiss market coupling: quadratic pairwise interaction of strength
/// g/N plus a uniform external field B.
struct MarketCoupling {
  double g = 0.0;
  double B = 0.0;
  int N = 2;

  void validate() const;
};

enum class Stability { Stable, Unstable };

struct EquilibriumRoot {
  double m = 0.0;
  double free_energy = 0.0;  // relative to the root closest to zero
  Stability stability = Stability::Stable;
};

struct SelfConsistencyResult {
  std::vector<EquilibriumRoot> roots;  // ascending in m
};

/// log Z(m) in the mixture convention log Z = 2 V_hat + log Omega_bar.
/// Constant offsets are convention-bound; only m-differences are physical.
double log_partition(const NesParams& p, double g, double m, double B = 0.0);

/// Z(m).  Symmetric parameter sets with g > 0 use the hyperbolic closed form,
/// which carries a different constant prefactor than the general convention.
double partition_function(const NesParams& p, double g, double m);

/// d log Z / dm = (2g/h^2) E[y] under the tilted stationary mixture; exact.
double log_partition_deriv_m(const NesParams& p, double g, double m,
                             double B = 0.0);

/// Mean of the tilted stationary mixture with tilt L = g m + B.
double tilted_mean(const NesParams& p, double g, double m, double B = 0.0);

/// Fixed-point right-hand side.  Symmetric parameters use the bounded
/// hyperbolic form whose saturation level is B sigma^2 T / h^2 + mu T; the
/// general form returns the tilted mixture mean.  Root sets coincide.
double self_consistency_rhs(const NesParams& p, double g, double m, double B);

/// F(m) = -(h^2/2) log Z(m) + g m^2 / 2, stationary exactly at fixed points.
double free_energy(const NesParams& p, double g, double m, double B = 0.0);

/// d2F/dm2 = g (1 - (2g/h^2) Var[y]); negative curvature marks instability.
double free_energy_curvature(const NesParams& p, double g, double m,
                             double B = 0.0);

/// All fixed points on a sign-change grid scan plus bisection.  Free energies
/// are reported relative to the root closest to m = 0.
SelfConsistencyResult solve_self_consistency(const NesParams& p, double g,
                                             double B = 0.0);

}  // namespace manes
