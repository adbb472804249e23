#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "manes/dynamics.hpp"
#include "manes/errors.hpp"
#include "manes/gm_potential.hpp"
#include "manes/hetero_market.hpp"
#include "manes/mean_field.hpp"
#include "support/checks.hpp"

using namespace manes;
using testsupport::close;
using testsupport::ks_distance;

namespace {

NesParams symmetric_params(double h) {
  NesParams p;
  p.mu1 = 0.4;
  p.mu2 = -0.4;
  p.sigma1 = p.sigma2 = 0.1;
  p.a = 0.5;
  p.T = 1.0;
  p.h = h;
  return p;
}

std::vector<double> stationary_grid_density(const NesParams& p, double g,
                                            double m,
                                            const std::vector<double>& y,
                                            double dy) {
  const RenormalizedParams rp = renormalize(p, g, m);
  const MixtureStationary mix = stationary_density(rp.as_params(p.h, p.T));
  std::vector<double> d(y.size());
  double mass = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    d[j] = mix.pdf(y[j]);
    mass += d[j] * dy;
  }
  for (double& v : d) v /= mass;
  return d;
}

}  // namespace

TEST_CASE("pairwise and mean-field forces coincide") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const NesParams p = symmetric_params(0.2);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> y(60);
    for (double& v : y) v = u(rng);
    REQUIRE(force_equivalence(p, 0.35, y) < 1e-12);
  }
}

TEST_CASE("simulation is bit reproducible per seed") {
  const NesParams p = symmetric_params(0.2);
  SimConfig cfg;
  cfg.n_particles = 40;
  cfg.steps = 2000;
  cfg.seed = 7;
  cfg.init.kind = InitSpec::Kind::Gaussian;
  cfg.init.mean = 0.1;
  cfg.init.sd = 0.2;
  const TrajectoryStats a = simulate_particles(p, 0.2, cfg);
  const TrajectoryStats b = simulate_particles(p, 0.2, cfg);
  REQUIRE(a.m_hat.size() == b.m_hat.size());
  for (std::size_t i = 0; i < a.m_hat.size(); ++i)
    REQUIRE(a.m_hat[i] == b.m_hat[i]);
  cfg.seed = 8;
  const TrajectoryStats c = simulate_particles(p, 0.2, cfg);
  REQUIRE(a.m_hat.back() != c.m_hat.back());
}

TEST_CASE("record bookkeeping and automatic step size") {
  NesParams p = symmetric_params(0.5);
  p.sigma1 = p.sigma2 = 0.04;
  SimConfig cfg;
  cfg.n_particles = 10;
  cfg.steps = 1000;
  cfg.record_every = 50;
  cfg.burn_in = 0;
  const TrajectoryStats st = simulate_particles(p, 0.2, cfg);
  REQUIRE(close(st.dt, 0.1 * 0.0016 * 1.0 / 0.25, 1e-15));  // 6.4e-4 branch
  REQUIRE(st.m_hat.size() == 20);
  REQUIRE(st.var_hat.size() == 20);
  for (std::size_t i = 0; i < st.times.size(); ++i)
    REQUIRE(close(st.times[i], (i + 1) * 50 * st.dt, 1e-12));
  double mean = 0.0;
  for (double v : st.m_hat) mean += v;
  REQUIRE(close(st.m_time_avg, mean / 20.0, 1e-13, 1e-15));
}

TEST_CASE("single particle samples the bare stationary law") {
  NesParams p;
  p.mu1 = 0.1;
  p.mu2 = -0.1;
  p.sigma1 = p.sigma2 = 0.2;
  p.h = 0.25;
  SimConfig cfg;
  cfg.n_particles = 1;
  cfg.steps = 20000000;
  cfg.record_every = 200;
  cfg.burn_in = 2000000;
  cfg.seed = 3;
  const TrajectoryStats st = simulate_particles(p, 0.0, cfg);
  const double burn_time = cfg.burn_in * st.dt;
  std::vector<double> samples;
  for (std::size_t i = 0; i < st.times.size(); ++i)
    if (st.times[i] > burn_time) samples.push_back(st.m_hat[i]);
  REQUIRE(samples.size() > 50000);
  const MixtureStationary mix = stationary_density(p);
  const double d = ks_distance(std::move(samples),
                               [&](double x) { return mix.cdf(x); });
  REQUIRE(d < 0.025);
}

TEST_CASE("ensemble relaxes to the ordered root from a biased start") {
  const NesParams p = symmetric_params(0.15);
  const SelfConsistencyResult res = solve_self_consistency(p, 0.2);
  REQUIRE(res.roots.size() == 3);
  const double target = res.roots[2].m;
  SimConfig cfg;
  cfg.n_particles = 200;
  cfg.steps = 50000;
  cfg.seed = 5;
  cfg.init.kind = InitSpec::Kind::PointMass;
  cfg.init.mean = 0.3;
  const TrajectoryStats st = simulate_particles(p, 0.2, cfg);
  REQUIRE(close(st.m_time_avg, target, 0.0, 0.05));
  REQUIRE(st.m_std_error > 0.0);
  REQUIRE(st.m_std_error < 0.05);
}

TEST_CASE("disordered phase fluctuates around zero") {
  // Wells are deep, so each particle keeps its initial well and m_hat is a
  // frozen binomial split of scale mu T / sqrt(N).  No macroscopic order.
  const NesParams p = symmetric_params(0.35);
  const double split_sd = 0.4 / std::sqrt(200.0);
  double sum = 0.0;
  for (std::uint64_t seed = 9; seed < 13; ++seed) {
    SimConfig cfg;
    cfg.n_particles = 200;
    cfg.steps = 50000;
    cfg.seed = seed;
    const TrajectoryStats st = simulate_particles(p, 0.2, cfg);
    REQUIRE(std::fabs(st.m_time_avg) < 3.5 * split_sd);
    sum += st.m_time_avg;
  }
  REQUIRE(std::fabs(sum / 4.0) < 2.0 * split_sd);
}

TEST_CASE("cross covariance of particles matches linear response") {
  // Overlapping wells keep the stationary law unimodal, so the particle
  // system actually equilibrates on the run length.  Deep double wells
  // freeze the well populations and never sample the predicted covariance.
  NesParams p;
  p.mu1 = 0.1;
  p.mu2 = -0.1;
  p.sigma1 = p.sigma2 = 0.2;
  p.a = 0.5;
  p.T = 1.0;
  p.h = 0.15;
  const double g = 0.5;
  const int n = 200;
  HeterogeneousMarket mkt;
  mkt.g = g;
  mkt.h = p.h;
  mkt.T = 1.0;
  mkt.assets.assign(n, AssetParams{0.1, 0.2, 0.0});
  const LinearResponse lr = linear_response(mkt);
  const double pred_offdiag = lr.C[1];            // i != j entry
  const double pred_var_m =
      0.5 * p.h * p.h / (mkt.g * (1.0 - lr.A[0])) * lr.A[0] / n;
  double cov_sum = 0.0, cov_sum2 = 0.0, var_sum = 0.0;
  const int n_seeds = 12;
  for (int s = 0; s < n_seeds; ++s) {
    SimConfig cfg;
    cfg.n_particles = n;
    cfg.steps = 200000;
    cfg.seed = 100 + s;
    const TrajectoryStats st = simulate_particles(p, g, cfg);
    cov_sum += st.mean_offdiag_cov;
    cov_sum2 += st.mean_offdiag_cov * st.mean_offdiag_cov;
    var_sum += st.m_hat_variance;
  }
  const double cov = cov_sum / n_seeds;
  const double cov_se = std::sqrt(
      std::max(0.0, cov_sum2 / n_seeds - cov * cov) / (n_seeds - 1.0));
  REQUIRE(std::fabs(cov - pred_offdiag) < std::max(3.0 * cov_se,
                                                   0.35 * pred_offdiag));
  REQUIRE(close(var_sum / n_seeds, pred_var_m, 0.35));
}

TEST_CASE("oversized steps trip the stability guard") {
  const NesParams p = symmetric_params(0.15);
  SimConfig cfg;
  cfg.n_particles = 20;
  cfg.steps = 2000;
  cfg.dt = 10.0;
  REQUIRE_THROWS_AS(simulate_particles(p, 0.2, cfg), UnstableStep);
}

TEST_CASE("simulation config validation") {
  const NesParams p = symmetric_params(0.2);
  SimConfig cfg;
  cfg.n_particles = 0;
  REQUIRE_THROWS_AS(simulate_particles(p, 0.2, cfg), ConstraintViolation);
  cfg = SimConfig{};
  cfg.burn_in = cfg.steps;
  REQUIRE_THROWS_AS(simulate_particles(p, 0.2, cfg), ConstraintViolation);
  cfg = SimConfig{};
  REQUIRE_THROWS_AS(simulate_particles(p, -0.1, cfg), ConstraintViolation);
}

TEST_CASE("grid evolution reaches the discrete self-consistent state") {
  const NesParams p = symmetric_params(0.3);
  const double g = 0.2;
  GridConfig grid;
  grid.n_cells = 400;
  // Broad centered start away from the stationary profile.
  std::vector<double> y(grid.n_cells), init(grid.n_cells);
  const double lo = -1.4, hi = 1.4;
  grid.y_min = lo;
  grid.y_max = hi;
  const double dy = (hi - lo) / grid.n_cells;
  double mass = 0.0;
  for (int j = 0; j < grid.n_cells; ++j) {
    y[j] = lo + (j + 0.5) * dy;
    init[j] = std::exp(-0.5 * y[j] * y[j] / 0.09);
    mass += init[j] * dy;
  }
  for (double& v : init) v /= mass;
  const McKeanVlasovResult res = evolve_mckean_vlasov(p, g, grid, init, 30.0);
  REQUIRE(res.mass_error_max < 1e-12);
  REQUIRE(std::fabs(res.first_moment) < 1e-9);
  // Discrete fixed point: Boltzmann weights of the tilted potential at the
  // final moment, normalized on the grid.
  const double h2 = p.h * p.h;
  std::vector<double> fix(grid.n_cells);
  double fmass = 0.0;
  for (int j = 0; j < grid.n_cells; ++j) {
    const double phi = -2.0 * log_psi0(p, y[j]) +
                       2.0 * g / h2 * (0.5 * y[j] * y[j] -
                                       res.first_moment * y[j]);
    fix[j] = std::exp(-phi);
    fmass += fix[j] * dy;
  }
  double l1 = 0.0;
  for (int j = 0; j < grid.n_cells; ++j)
    l1 += std::fabs(res.density[j] - fix[j] / fmass) * dy;
  REQUIRE(l1 < 1e-8);
}

TEST_CASE("grid evolution tracks the ordered root moment") {
  const NesParams p = symmetric_params(0.1);
  const double g = 0.2;
  const SelfConsistencyResult sc = solve_self_consistency(p, g);
  const double target = sc.roots[2].m;
  GridConfig grid;
  grid.n_cells = 400;
  grid.record_every = 5000;
  std::vector<double> init(grid.n_cells);
  // Mirror the solver's automatic domain to place the cells.
  const double smax = 0.1;
  const double lo = -0.4 - 10.0 * smax, hi = 0.4 + 10.0 * smax;
  const double dy = (hi - lo) / grid.n_cells;
  double mass = 0.0;
  for (int j = 0; j < grid.n_cells; ++j) {
    const double yj = lo + (j + 0.5) * dy;
    init[j] = std::exp(-0.5 * (yj - 0.3) * (yj - 0.3) / (0.05 * 0.05));
    mass += init[j] * dy;
  }
  for (double& v : init) v /= mass;
  const McKeanVlasovResult res = evolve_mckean_vlasov(p, g, grid, init, 40.0);
  REQUIRE(res.mass_error_max < 1e-12);
  REQUIRE(std::fabs(res.first_moment - target) < 1e-3);
  REQUIRE(!res.snapshots.empty());
  REQUIRE(res.snapshots.size() == res.times.size());
  for (const std::vector<double>& snap : res.snapshots) {
    double sm = 0.0;
    for (double v : snap) sm += v * dy;
    REQUIRE(close(sm, 1.0, 1e-12));
  }
}

TEST_CASE("stationary start stays put") {
  const NesParams p = symmetric_params(0.3);
  const double g = 0.2;
  GridConfig grid;
  grid.n_cells = 300;
  grid.y_min = -1.4;
  grid.y_max = 1.4;
  const double dy = 2.8 / grid.n_cells;
  std::vector<double> y(grid.n_cells);
  for (int j = 0; j < grid.n_cells; ++j) y[j] = -1.4 + (j + 0.5) * dy;
  const std::vector<double> init = stationary_grid_density(p, g, 0.0, y, dy);
  const McKeanVlasovResult res = evolve_mckean_vlasov(p, g, grid, init, 2.0);
  // Node values of the stationary law are the discrete fixed point exactly,
  // so the profile holds to roundoff accumulation, not just O(dy^2).
  double l1 = 0.0;
  for (int j = 0; j < grid.n_cells; ++j)
    l1 += std::fabs(res.density[j] - init[j]) * dy;
  REQUIRE(l1 < 1e-6);
}

TEST_CASE("grid evolution input validation") {
  const NesParams p = symmetric_params(0.3);
  GridConfig grid;
  grid.n_cells = 100;
  grid.y_min = -1.0;
  grid.y_max = 1.0;
  std::vector<double> init(100, 0.5);
  REQUIRE_NOTHROW(evolve_mckean_vlasov(p, 0.2, grid, init, 0.01));
  std::vector<double> wrong(99, 0.5);
  REQUIRE_THROWS_AS(evolve_mckean_vlasov(p, 0.2, grid, wrong, 0.01),
                    ConstraintViolation);
  std::vector<double> neg(100, 0.5);
  neg[3] = -0.1;
  REQUIRE_THROWS_AS(evolve_mckean_vlasov(p, 0.2, grid, neg, 0.01),
                    ConstraintViolation);
  std::vector<double> unnorm(100, 0.7);
  REQUIRE_THROWS_AS(evolve_mckean_vlasov(p, 0.2, grid, unnorm, 0.01),
                    ConstraintViolation);
  GridConfig fast = grid;
  fast.dt = 1.0;
  REQUIRE_THROWS_AS(evolve_mckean_vlasov(p, 0.2, fast, init, 0.01),
                    CFLViolation);
  REQUIRE_THROWS_AS(evolve_mckean_vlasov(p, 0.2, grid, init, 0.0),
                    ConstraintViolation);
}
