#include "manes/phase.hpp"

#include <cmath>

#include "manes/errors.hpp"
#include "manes/gm_potential.hpp"
#include "manes/numerics.hpp"

namespace manes {

namespace {

double overlap_b(double x, double mu, double sigma, double T, double g) {
  const double s2 = sigma * sigma;
  return std::exp(-x * mu * mu * T / (s2 * (x + g * s2 * T)));
}

SymmetricDecomposition require_symmetric(const NesParams& p) {
  if (!is_symmetric(p, 1e-9))
    throw ConstraintViolation("parameters must be symmetric");
  return symmetrize(p);
}

}  // namespace

CriticalPoint critical_volatility(double mu, double sigma, double T, double g) {
  const double s2 = sigma * sigma;
  double x = 2.0 * g * mu * mu * T * T - g * s2 * T;  // b = 0 seed
  if (!(x > 0.0)) throw NonCritical("no real critical volatility");
  for (int it = 0; it < 100000; ++it) {
    const double b = overlap_b(x, mu, sigma, T, g);
    const double target = 2.0 * g * mu * mu * T * T / (1.0 + b) - g * s2 * T;
    if (!(target > 0.0)) throw NonCritical("no real critical volatility");
    const double next = 0.5 * x + 0.5 * target;
    const bool done = std::fabs(std::sqrt(next) - std::sqrt(x)) < 1e-12;
    x = next;
    if (done) {
      const double bf = overlap_b(x, mu, sigma, T, g);
      if (2.0 * mu * mu * T / s2 < 1.0 + bf)
        throw NonCritical("bifurcation constraint violated at fixed point");
      return {std::sqrt(x), bf};
    }
  }
  throw NonConvergence("critical volatility iteration did not converge");
}

CriticalPoint critical_volatility(const NesParams& p_sym, double g) {
  const SymmetricDecomposition d = require_symmetric(p_sym);
  return critical_volatility(d.mu, d.sigma, p_sym.T, g);
}

std::vector<BifurcationPoint> bifurcation_sweep(const NesParams& p_sym, double g,
                                                const std::vector<double>& h_grid) {
  std::vector<BifurcationPoint> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    BifurcationPoint bp;
    bp.h = h;
    NesParams q = p_sym;
    q.h = h;
    try {
      bp.result = solve_self_consistency(q, g, 0.0);
    } catch (const std::exception& e) {
      bp.ok = false;
      bp.error = e.what();
    }
    out.push_back(std::move(bp));
  }
  return out;
}

BetaFit beta_exponent(const NesParams& p_sym, double g) {
  const SymmetricDecomposition d = require_symmetric(p_sym);
  const CriticalPoint cp = critical_volatility(d.mu, d.sigma, p_sym.T, g);

  const int n = 25;
  std::vector<double> h_grid(n);
  const double lo = std::log(0.001 * cp.h_c), hi = std::log(0.1 * cp.h_c);
  for (int i = 0; i < n; ++i)
    h_grid[i] = cp.h_c - std::exp(lo + (hi - lo) * i / (n - 1));

  std::vector<double> x, y;
  for (const BifurcationPoint& bp : bifurcation_sweep(p_sym, g, h_grid)) {
    if (!bp.ok || bp.result.roots.empty()) continue;
    const double m = bp.result.roots.back().m;
    if (m > 1e-8) {
      x.push_back(std::log(cp.h_c * cp.h_c - bp.h * bp.h));
      y.push_back(std::log(m));
    }
  }
  if (x.size() < 5)
    throw InsufficientBranch("fewer than 5 points on the ordered branch");

  const LineFit fit = fit_line(x, y);
  BetaFit out;
  out.beta = fit.slope;
  out.r2 = fit.r2;
  out.intercept = fit.intercept;
  const double D_c = cp.h_c * cp.h_c + g * d.sigma * d.sigma * p_sym.T;
  const double muT2 = d.mu * d.mu * p_sym.T * p_sym.T;
  out.closed_coeff = 3.0 * D_c * (1.0 + cp.b) / (2.0 * g * g * muT2 * (2.0 - cp.b));
  out.n_points = static_cast<int>(x.size());
  return out;
}

double specific_heat_jump(const NesParams& p_sym, double g) {
  const SymmetricDecomposition d = require_symmetric(p_sym);
  const CriticalPoint cp = critical_volatility(d.mu, d.sigma, p_sym.T, g);
  const double hc2 = cp.h_c * cp.h_c;
  const double muT4 = std::pow(d.mu * p_sym.T, 4);
  return 0.375 * (1.0 + cp.b) * (1.0 + cp.b) / (2.0 - cp.b) * hc2 * hc2 /
         (g * g * muT4);
}

double susceptibility(const NesParams& p_sym, double g, double h) {
  const SymmetricDecomposition d = require_symmetric(p_sym);
  const double s2 = d.sigma * d.sigma;
  const double T = p_sym.T;
  const double h2 = h * h;
  if (g == 0.0) {
    const double b0 = std::exp(-d.mu * d.mu * T / s2);
    return s2 * T / h2 + 2.0 * d.mu * d.mu * T * T / (h2 * (1.0 + b0));
  }
  const double D = h2 + g * s2 * T;
  const double b = std::exp(-h2 * d.mu * d.mu * T / (s2 * D));
  const double hc2_ambient = 2.0 * g * d.mu * d.mu * T * T / (1.0 + b) - g * s2 * T;
  if (h2 - hc2_ambient < 1e-6)
    throw CriticalDivergence("susceptibility diverges at the critical point");
  const double A = g * s2 * T / D +
                   2.0 * g * h2 * d.mu * d.mu * T * T / (D * D * (1.0 + b));
  return A / (g * (1.0 - A));
}

}  // namespace manes
