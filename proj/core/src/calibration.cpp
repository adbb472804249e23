#include "manes/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "manes/errors.hpp"
#include "manes/numerics.hpp"

namespace manes {

namespace {

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double component_price(double w, double mean, double var, double spot,
                       double strike, OptionType type) {
  const double s = std::sqrt(var);
  const double fwd = spot * std::exp(mean + 0.5 * var);
  if (strike <= 0.0) return type == OptionType::Call ? w * fwd : 0.0;
  const double d2 = (mean - std::log(strike / spot)) / s;
  const double d1 = d2 + s;
  if (type == OptionType::Call)
    return w * (fwd * norm_cdf(d1) - strike * norm_cdf(d2));
  return w * (strike * norm_cdf(-d2) - fwd * norm_cdf(-d1));
}

}  // namespace

void OptionQuote::validate() const {
  if (expiry_date <= quote_date)
    throw ConstraintViolation("quote expiry must postdate the quote date");
  if (!(strike > 0.0)) throw ConstraintViolation("strike must be positive");
  if (!(mid_price >= 0.0))
    throw ConstraintViolation("mid price must be nonnegative");
  if (!(spot > 0.0)) throw ConstraintViolation("spot must be positive");
  if (!std::isfinite(rate)) throw ConstraintViolation("rate must be finite");
}

double OptionQuote::year_fraction() const {
  return static_cast<double>((expiry_date - quote_date).count()) / 365.0;
}

double price_european(const NesParams& barred, double spot, double rate,
                      double strike, OptionType type) {
  barred.validate();
  if (!(spot > 0.0)) throw ConstraintViolation("spot must be positive");
  if (strike < 0.0) throw ConstraintViolation("strike must be nonnegative");
  const MixtureStationary mix = stationary_density(barred);
  double undiscounted = 0.0;
  for (int k = 0; k < 3; ++k)
    undiscounted += component_price(mix.weight[k], mix.mean[k], mix.variance[k],
                                    spot, strike, type);
  return std::exp(-rate * barred.T) * undiscounted;
}

double equilibrium_return(const RenormalizedParams& rp, double T) {
  NesParams q;
  q.mu1 = rp.mu1;
  q.mu2 = rp.mu2;
  q.sigma1 = rp.sigma1;
  q.sigma2 = rp.sigma2;
  q.a = rp.a;
  q.T = T;
  q.h = 1.0;  // mixture weights carry no h dependence
  const MixtureStationary mix = stationary_density(q);
  const double s2sum = rp.sigma1 * rp.sigma1 + rp.sigma2 * rp.sigma2;
  const double w1 = mix.weight[0] + mix.weight[2] * rp.sigma2 * rp.sigma2 / s2sum;
  const double w2 = mix.weight[1] + mix.weight[2] * rp.sigma1 * rp.sigma1 / s2sum;
  return w1 * rp.mu1 * T + w2 * rp.mu2 * T;
}

double estimate_coupling(double sigma1_bar, double sigma2_bar, double h,
                         double T, double delta_sigma2) {
  if (!(sigma1_bar > 0.0) || !(sigma2_bar > 0.0) || !(h > 0.0) || !(T > 0.0) ||
      !(delta_sigma2 >= 0.0))
    throw ConstraintViolation("invalid coupling-estimate inputs");
  const double s_m2 =
      0.5 * std::max(sigma1_bar * sigma1_bar, sigma2_bar * sigma2_bar) +
      delta_sigma2;
  return h * h / (2.0 * s_m2 * T);
}

CalibrationResult calibrate(const std::vector<OptionQuote>& chain,
                            QuoteSide side, const CalibrationConfig& cfg) {
  if (!(cfg.h > 0.0) || cfg.n_starts < 1 || cfg.max_evals < 100 ||
      !(cfg.delta_sigma2 >= 0.0))
    throw ConstraintViolation("invalid calibration config");

  const OptionType want =
      side == QuoteSide::Calls ? OptionType::Call : OptionType::Put;
  std::vector<OptionQuote> quotes;
  for (const OptionQuote& q : chain)
    if (q.type == want) quotes.push_back(q);
  if (quotes.size() < 6)
    throw InsufficientQuotes("need at least 6 quotes on the requested side, got " +
                             std::to_string(quotes.size()));
  for (const OptionQuote& q : quotes) {
    q.validate();
    if (!(q.mid_price > 0.0))
      throw ConstraintViolation("relative price error needs positive mid prices");
    if (q.expiry_date != quotes.front().expiry_date ||
        q.quote_date != quotes.front().quote_date)
      throw ConstraintViolation("quotes must share one expiry and quote date");
    if (std::fabs(q.spot - quotes.front().spot) > 1e-9 ||
        std::fabs(q.rate - quotes.front().rate) > 1e-12)
      throw ConstraintViolation("quotes must share spot and rate");
  }

  const double T = quotes.front().year_fraction();
  const double spot = quotes.front().spot;
  const double rate = quotes.front().rate;

  const std::vector<double> lo = {-3.0, -3.0, 0.01, 0.01, 0.02};
  const std::vector<double> hi = {3.0, 3.0, 3.0, 3.0, 0.98};

  long long evals = 0;
  auto objective = [&](const std::vector<double>& x) {
    NesParams q;
    q.mu1 = x[0];
    q.mu2 = x[1];
    q.sigma1 = x[2];
    q.sigma2 = x[3];
    q.a = x[4];
    q.T = T;
    q.h = cfg.h;
    ++evals;
    double acc = 0.0;
    for (const OptionQuote& quote : quotes) {
      const double model =
          price_european(q, spot, rate, quote.strike, quote.type);
      acc += std::fabs(model - quote.mid_price) / quote.mid_price;
    }
    return acc / static_cast<double>(quotes.size());
  };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> rot(5);
  for (double& r : rot) r = unif(rng);
  static const std::uint64_t bases[5] = {2, 3, 5, 7, 11};

  std::vector<double> step(5);
  for (std::size_t d = 0; d < 5; ++d) step[d] = 0.1 * (hi[d] - lo[d]);
  std::vector<std::pair<double, std::vector<double>>> pool;
  pool.reserve(static_cast<std::size_t>(cfg.n_starts));
  for (int k = 0; k < cfg.n_starts; ++k) {
    std::vector<double> x0(5);
    for (std::size_t d = 0; d < 5; ++d) {
      double u = halton(static_cast<std::uint64_t>(k) + 1, bases[d]) + rot[d];
      u -= std::floor(u);
      x0[d] = lo[d] + u * (hi[d] - lo[d]);
    }
    NelderMeadResult r =
        nelder_mead(objective, x0, step, lo, hi, cfg.max_evals, 1e-12);
    if (!std::isfinite(r.fx)) continue;
    // Component relabeling leaves the loss unchanged; fold onto mu1 >= mu2.
    if (r.x[0] < r.x[1]) {
      std::swap(r.x[0], r.x[1]);
      std::swap(r.x[2], r.x[3]);
      r.x[4] = 1.0 - r.x[4];
    }
    pool.emplace_back(r.fx, std::move(r.x));
  }
  if (pool.empty()) throw OptimizerFailure("no start reached a finite loss");
  std::sort(pool.begin(), pool.end(),
            [](const auto& p, const auto& q) { return p.first < q.first; });

  // Five-dimensional simplices collapse along the valley floor well short of
  // the basin bottom, and a stalled run in the global basin can rank below a
  // converged local minimum. Polish the best few distinct basins with fresh
  // simplexes at the incumbent, revisiting each scale until it stops paying.
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  std::vector<std::vector<double>> seen;
  for (const auto& [f0, x0] : pool) {
    bool dup = false;
    for (const auto& s : seen) {
      double d_max = 0.0;
      for (std::size_t d = 0; d < 5; ++d)
        d_max = std::max(d_max, std::fabs(x0[d] - s[d]) / (hi[d] - lo[d]));
      if (d_max < 0.02) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    seen.push_back(x0);
    double f = f0;
    std::vector<double> x = x0;
    for (double scale = 0.1; scale >= 1e-4; scale *= 0.1) {
      std::vector<double> fine(5);
      for (std::size_t d = 0; d < 5; ++d) fine[d] = scale * (hi[d] - lo[d]);
      for (int r = 0; r < 6; ++r) {
        const NelderMeadResult nm =
            nelder_mead(objective, x, fine, lo, hi, cfg.max_evals, 1e-14);
        const double gain = f - nm.fx;
        if (nm.fx < f) {
          f = nm.fx;
          x = nm.x;
        }
        if (!(gain > 1e-4 * std::max(f, 1e-12))) break;
      }
    }
    if (f < best_f) {
      best_f = f;
      best_x = std::move(x);
    }
    if (seen.size() == 6) break;
  }

  if (best_x[0] < best_x[1]) {
    std::swap(best_x[0], best_x[1]);
    std::swap(best_x[2], best_x[3]);
    best_x[4] = 1.0 - best_x[4];
  }

  CalibrationResult out;
  out.barred.mu1 = best_x[0];
  out.barred.mu2 = best_x[1];
  out.barred.sigma1 = best_x[2];
  out.barred.sigma2 = best_x[3];
  out.barred.a = best_x[4];
  out.barred.v_hat = 0.0;
  out.h = cfg.h;
  out.T = T;
  out.mape = objective(best_x);
  out.m = equilibrium_return(out.barred, T);
  out.g = estimate_coupling(best_x[2], best_x[3], cfg.h, T, cfg.delta_sigma2);
  const double h2 = cfg.h * cfg.h;
  out.g_valid = out.g * best_x[2] * best_x[2] * T < h2 &&
                out.g * best_x[3] * best_x[3] * T < h2;
  out.starts_used = cfg.n_starts;
  out.evaluations = evals - 1;  // final recomputation excluded
  if (out.g_valid) {
    try {
      out.bare = invert_renormalization(out.barred, out.g, out.m, cfg.h, T);
      out.bare_valid = true;
    } catch (const Error&) {
      out.bare_valid = false;
    }
  }
  return out;
}

}  // namespace manes
