#pragma once

#include <cstdint>
#include <vector>

#include "manes/nes_params.hpp"

namespace manes {

struct InitSpec {
  enum class Kind { PointMass, Gaussian };
  Kind kind = Kind::PointMass;
  double mean = 0.0;
  double sd = 0.0;
};

struct SimConfig {
  int n_particles = 500;
  double dt = 0.0;  // 0 selects min(1e-3, 0.1 sigma_min^2 T / h^2)
  long long steps = 10000;
  std::uint64_t seed = 1;
  long long burn_in = -1;  // steps discarded; negative selects steps / 5
  int record_every = 10;
  InitSpec init;
};

struct TrajectoryStats {
  std::vector<double> times;
  std::vector<double> m_hat;    // cross-sectional mean per record
  std::vector<double> var_hat;  // cross-sectional variance per record
  double dt = 0.0;
  long long steps = 0;
  // Time averages over post-burn-in records.
  double m_time_avg = 0.0;
  double var_time_avg = 0.0;
  double m_hat_variance = 0.0;     // variance of the ensemble mean over time
  double mean_offdiag_cov = 0.0;   // cross covariance solved from Var(m_hat) and var
  double m_std_error = 0.0;        // batch-means standard error of m_time_avg
};

/// Mean-field form of the drift on particle i; O(N) per sweep.
double mean_field_force(const NesParams& p, double g, double y, double y_bar);

/// O(N^2) pairwise Curie-Weiss sum; equals the mean-field form identically.
std::vector<double> pairwise_force(const NesParams& p, double g,
                                   const std::vector<double>& y);

/// Max component difference between the two force routes.
double force_equivalence(const NesParams& p, double g,
                         const std::vector<double>& y);

/// Euler-Maruyama on N interacting particles; bit-reproducible per seed.
/// Throws UnstableStep when a particle leaves the confinement sanity bound.
TrajectoryStats simulate_particles(const NesParams& p, double g,
                                   const SimConfig& cfg);

struct GridConfig {
  double y_min = 0.0;  // y_min == y_max selects means +- 10 sigma sqrt(T)
  double y_max = 0.0;
  int n_cells = 400;
  double dt = 0.0;  // 0 selects the explicit-step stability bound
  int record_every = 0;  // 0 records only the final state
};

struct McKeanVlasovResult {
  std::vector<double> y;        // cell centers
  std::vector<double> density;  // final density
  std::vector<double> times;
  std::vector<std::vector<double>> snapshots;
  double mass_error_max = 0.0;  // worst per-step deviation from unit mass
  double first_moment = 0.0;
  double dt = 0.0;
  long long steps = 0;
};

/// Nonlinear Fokker-Planck integration with flux weights built from potential
/// differences, so the discrete stationary state is the Boltzmann density at
/// the nodes exactly.  Zero-flux boundaries conserve mass to roundoff.
McKeanVlasovResult evolve_mckean_vlasov(const NesParams& p, double g,
                                        const GridConfig& grid,
                                        const std::vector<double>& init,
                                        double t_end);

}  // namespace manes
