#include "manes/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "manes/errors.hpp"
#include "manes/gm_potential.hpp"
#include "manes/numerics.hpp"

namespace manes {

namespace {

/// Precomputed constants for the two-branch potential gradient.
struct DerivCache {
  double m1, m2, v1, v2, h2, c0;

  explicit DerivCache(const NesParams& p)
      : m1(p.mu1 * p.T),
        m2(p.mu2 * p.T),
        v1(p.sigma1 * p.sigma1 * p.T),
        v2(p.sigma2 * p.sigma2 * p.T),
        h2(p.h * p.h),
        c0(std::log1p(-p.a) - std::log(p.a) + 0.5 * std::log(v2 / v1)) {}

  double deriv(double y) const {
    const double d1 = y - m1, d2 = y - m2;
    const double t = c0 - 0.5 * d1 * d1 / v1 + 0.5 * d2 * d2 / v2;
    double r1;
    if (t > 40.0)
      r1 = 1.0;
    else if (t < -40.0)
      r1 = 0.0;
    else
      r1 = 1.0 / (1.0 + std::exp(-t));
    return h2 * (r1 * d1 / v1 + (1.0 - r1) * d2 / v2);
  }
};

}  // namespace

double mean_field_force(const NesParams& p, double g, double y, double y_bar) {
  return -potential_deriv(p, y) - g * (y - y_bar);
}

std::vector<double> pairwise_force(const NesParams& p, double g,
                                   const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double inter = 0.0;
    for (std::size_t j = 0; j < n; ++j) inter += y[i] - y[j];
    f[i] = -potential_deriv(p, y[i]) - g / static_cast<double>(n) * inter;
  }
  return f;
}

double force_equivalence(const NesParams& p, double g,
                         const std::vector<double>& y) {
  const std::vector<double> pw = pairwise_force(p, g, y);
  double y_bar = 0.0;
  for (double v : y) y_bar += v;
  y_bar /= static_cast<double>(y.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    worst = std::max(worst,
                     std::fabs(pw[i] - mean_field_force(p, g, y[i], y_bar)));
  return worst;
}

TrajectoryStats simulate_particles(const NesParams& p, double g,
                                   const SimConfig& cfg) {
  p.validate();
  if (g < 0.0) throw ConstraintViolation("coupling g must be nonnegative");
  if (cfg.n_particles < 1 || cfg.steps < 1 || cfg.record_every < 1)
    throw ConstraintViolation("invalid simulation config");

  const double h2 = p.h * p.h;
  const double smin2 = std::min(p.sigma1 * p.sigma1, p.sigma2 * p.sigma2);
  const double dt = cfg.dt > 0.0 ? cfg.dt : std::min(1e-3, 0.1 * smin2 * p.T / h2);
  const long long steps = cfg.steps;
  const long long burn_in = cfg.burn_in >= 0 ? cfg.burn_in : steps / 5;
  if (burn_in >= steps) throw ConstraintViolation("burn_in must leave samples");
  const double smax = std::max(p.sigma1, p.sigma2) * std::sqrt(p.T);
  const double bound =
      std::max(std::fabs(p.mu1), std::fabs(p.mu2)) * p.T + 20.0 * smax;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = cfg.n_particles;
  std::vector<double> y(n, cfg.init.mean);
  if (cfg.init.kind == InitSpec::Kind::Gaussian)
    for (double& v : y) v = cfg.init.mean + cfg.init.sd * gauss(rng);

  const DerivCache dc(p);
  const double noise = p.h * std::sqrt(dt);

  TrajectoryStats st;
  st.dt = dt;
  st.steps = steps;
  double sum_m = 0.0, sum_m2 = 0.0, sum_var = 0.0;
  long long n_rec = 0;
  std::vector<double> post_burn_m;

  for (long long s = 0; s < steps; ++s) {
    double y_bar = 0.0;
    for (double v : y) y_bar += v;
    y_bar /= n;
    for (int i = 0; i < n; ++i) {
      const double f = -dc.deriv(y[i]) - g * (y[i] - y_bar);
      y[i] += f * dt + noise * gauss(rng);
    }
    if ((s + 1) % cfg.record_every != 0) continue;

    double m = 0.0, q = 0.0, worst = 0.0;
    for (double v : y) {
      m += v;
      q += v * v;
      worst = std::max(worst, std::fabs(v));
    }
    m /= n;
    q /= n;
    if (!(worst <= bound))
      throw UnstableStep("particle left the confinement region; reduce dt");
    st.times.push_back((s + 1) * dt);
    st.m_hat.push_back(m);
    st.var_hat.push_back(q - m * m);
    if (s >= burn_in) {
      sum_m += m;
      sum_m2 += m * m;
      sum_var += q - m * m;
      post_burn_m.push_back(m);
      ++n_rec;
    }
  }
  if (n_rec > 0) {
    st.m_time_avg = sum_m / n_rec;
    st.var_time_avg = sum_var / n_rec;
    st.m_hat_variance = sum_m2 / n_rec - st.m_time_avg * st.m_time_avg;
    if (n > 1)
      st.mean_offdiag_cov =
          (st.m_hat_variance - st.var_time_avg / (n - 1)) * n / (n + 1.0);
    const int n_batch = 20;
    if (post_burn_m.size() >= 2 * n_batch) {
      const std::size_t bs = post_burn_m.size() / n_batch;
      double bm_sum = 0.0, bm_sum2 = 0.0;
      for (int k = 0; k < n_batch; ++k) {
        double bm = 0.0;
        for (std::size_t j = 0; j < bs; ++j) bm += post_burn_m[k * bs + j];
        bm /= static_cast<double>(bs);
        bm_sum += bm;
        bm_sum2 += bm * bm;
      }
      const double bmean = bm_sum / n_batch;
      const double bvar = (bm_sum2 / n_batch - bmean * bmean) *
                          n_batch / (n_batch - 1.0);
      st.m_std_error = std::sqrt(std::max(0.0, bvar) / n_batch);
    }
  }
  return st;
}

McKeanVlasovResult evolve_mckean_vlasov(const NesParams& p, double g,
                                        const GridConfig& grid,
                                        const std::vector<double>& init,
                                        double t_end) {
  p.validate();
  if (g < 0.0) throw ConstraintViolation("coupling g must be nonnegative");
  if (grid.n_cells < 10) throw ConstraintViolation("grid too coarse");
  if (!(t_end > 0.0)) throw ConstraintViolation("t_end must be positive");

  const double smax = std::max(p.sigma1, p.sigma2) * std::sqrt(p.T);
  double lo = grid.y_min, hi = grid.y_max;
  if (!(hi > lo)) {
    lo = std::min(p.mu1, p.mu2) * p.T - 10.0 * smax;
    hi = std::max(p.mu1, p.mu2) * p.T + 10.0 * smax;
  }
  const int n = grid.n_cells;
  const double dy = (hi - lo) / n;
  const double h2 = p.h * p.h;
  const double Dc = 0.5 * h2;  // diffusion coefficient

  if (static_cast<int>(init.size()) != n)
    throw ConstraintViolation("init density size does not match the grid");

  McKeanVlasovResult out;
  out.y.resize(n);
  for (int j = 0; j < n; ++j) out.y[j] = lo + (j + 0.5) * dy;

  std::vector<double> pd = init;
  double mass = 0.0;
  for (double v : pd) {
    if (v < 0.0) throw ConstraintViolation("init density must be nonnegative");
    mass += v * dy;
  }
  if (std::fabs(mass - 1.0) > 1e-6)
    throw ConstraintViolation("init density must be normalized on the grid");
  for (double& v : pd) v /= mass;

  // Static part of the dimensionless potential, 2 V / h^2 = -2 log psi0.
  std::vector<double> phi0(n), phi(n);
  double max_grad = 0.0;
  for (int j = 0; j < n; ++j) phi0[j] = -2.0 * log_psi0(p, out.y[j]);
  const double ymax_abs = std::max(std::fabs(lo), std::fabs(hi));
  for (int j = 0; j < n; ++j)
    max_grad = std::max(max_grad, std::fabs(potential_deriv(p, out.y[j])) +
                                      2.0 * g * ymax_abs);

  const double dt_stab =
      std::min(0.35 * dy * dy / Dc, 0.45 * dy / std::max(max_grad, 1e-12));
  double dt = grid.dt > 0.0 ? grid.dt : dt_stab;
  if (dt > dt_stab)
    throw CFLViolation("dt exceeds the explicit stability bound");
  const long long steps = static_cast<long long>(std::ceil(t_end / dt));
  dt = t_end / static_cast<double>(steps);

  auto bernoulli_weight = [](double x) {
    // x / (e^x - 1), series near zero
    if (std::fabs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
    return x / std::expm1(x);
  };

  std::vector<double> flux(n + 1, 0.0);
  const long long rec = grid.record_every > 0 ? grid.record_every : steps + 1;
  out.dt = dt;
  out.steps = steps;

  for (long long s = 0; s < steps; ++s) {
    double m_hat = 0.0;
    for (int j = 0; j < n; ++j) m_hat += out.y[j] * pd[j];
    m_hat *= dy;
    const double tilt = 2.0 * g / h2;
    for (int j = 0; j < n; ++j)
      phi[j] = phi0[j] + tilt * (0.5 * out.y[j] * out.y[j] - m_hat * out.y[j]);

    for (int j = 0; j + 1 < n; ++j) {
      const double d = phi[j + 1] - phi[j];
      flux[j + 1] = Dc / dy *
                    (bernoulli_weight(d) * pd[j] - bernoulli_weight(-d) * pd[j + 1]);
    }
    for (int j = 0; j < n; ++j) {
      pd[j] -= dt / dy * (flux[j + 1] - flux[j]);
      if (pd[j] < -1e-12)
        throw UnstableStep("density went negative; reduce dt");
      if (pd[j] < 0.0) pd[j] = 0.0;
    }
    double m2 = 0.0;
    for (double v : pd) m2 += v * dy;
    out.mass_error_max = std::max(out.mass_error_max, std::fabs(m2 - 1.0));
    if ((s + 1) % rec == 0) {
      out.times.push_back((s + 1) * dt);
      out.snapshots.push_back(pd);
    }
  }

  out.density = pd;
  double fm = 0.0;
  for (int j = 0; j < n; ++j) fm += out.y[j] * pd[j];
  out.first_moment = fm * dy;
  return out;
}

}  // namespace manes
