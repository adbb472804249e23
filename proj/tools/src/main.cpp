#include <charconv>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manes/calibration.hpp"
#include "manes/dynamics.hpp"
#include "manes/errors.hpp"
#include "manes/gm_potential.hpp"
#include "manes/hetero_market.hpp"
#include "manes/io.hpp"
#include "manes/mean_field.hpp"
#include "manes/nes_params.hpp"
#include "manes/phase.hpp"
#include "manes/version.hpp"

using nlohmann::json;

namespace {

/// Errors raised while loading inputs map to exit 2, not 3.
template <typename F>
auto as_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const manes::Error& e) {
    throw std::runtime_error(e.what());
  }
}

json parse_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  const std::string text = manes::read_text_file(path);
  json j = json::parse(text, nullptr, true, false);
  if (!j.is_object()) throw std::runtime_error("config root must be an object");
  return j;
}

void apply_overrides(json& cfg, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("override must be key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    const std::string val = s.substr(eq + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size())
      throw std::runtime_error("override value must be numeric: '" + s + "'");
    cfg[key] = v;
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw std::runtime_error("unknown config key '" + item.key() + "' in " +
                               where);
  }
}

double num(const json& j, const char* key) {
  if (!j.contains(key))
    throw std::runtime_error(std::string("missing config key '") + key + "'");
  if (!j.at(key).is_number())
    throw std::runtime_error(std::string("config key '") + key +
                             "' must be numeric");
  return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double def) {
  return j.contains(key) ? num(j, key) : def;
}

manes::NesParams params_from(const json& j) {
  manes::NesParams p;
  p.mu1 = num(j, "mu1");
  p.mu2 = num(j, "mu2");
  p.sigma1 = num(j, "sigma1");
  p.sigma2 = num(j, "sigma2");
  p.a = num_or(j, "a", 0.5);
  p.T = num_or(j, "T", 1.0);
  p.h = num(j, "h");
  as_input([&] { p.validate(); return 0; });
  return p;
}

manes::NesParams symmetric_from(const json& j, double h_placeholder) {
  manes::NesParams p;
  const double mu = num(j, "mu");
  p.mu1 = mu;
  p.mu2 = -mu;
  p.sigma1 = p.sigma2 = num(j, "sigma");
  p.a = 0.5;
  p.T = num_or(j, "T", 1.0);
  p.h = j.contains("h") ? num(j, "h") : h_placeholder;
  as_input([&] { p.validate(); return 0; });
  return p;
}

json meta_block(const json& resolved) {
  json m;
  m["config"] = resolved;
  m["config_hash"] = manes::to_hex(manes::fnv1a_64(resolved.dump()));
  m["version"] = manes::kVersion;
  return m;
}

std::string csv_meta(const json& resolved) {
  std::string out = "# version=";
  out += manes::kVersion;
  out += " config_hash=";
  out += manes::to_hex(manes::fnv1a_64(resolved.dump()));
  out += "\n# config=";
  out += resolved.dump();
  out += "\n";
  return out;
}

void emit_json(const std::string& path, const json& art) {
  manes::write_text_file(path, art.dump(2) + "\n");
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw std::runtime_error("bad grid request");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

struct CommonOpts {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
};

json resolve(const CommonOpts& o,
             std::initializer_list<const char*> allowed, const char* where) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg, allowed, where);
  return cfg;
}

void run_potential(const CommonOpts& o) {
  const json cfg = resolve(o,
                           {"mu1", "mu2", "sigma1", "sigma2", "a", "T", "h",
                            "y_min", "y_max", "n"},
                           "potential");
  const manes::NesParams p = params_from(cfg);
  const double smax = std::max(p.sigma1, p.sigma2) * std::sqrt(p.T);
  const double lo =
      num_or(cfg, "y_min", std::min(p.mu1, p.mu2) * p.T - 6.0 * smax);
  const double hi =
      num_or(cfg, "y_max", std::max(p.mu1, p.mu2) * p.T + 6.0 * smax);
  const int n = static_cast<int>(num_or(cfg, "n", 801));

  const std::vector<double> grid = linspace(lo, hi, n);
  const manes::MixtureStationary mix = manes::stationary_density(p);
  std::string csv = csv_meta(cfg) + "y,V,dV,density\n";
  for (double y : grid) {
    csv += manes::format_double(y);
    csv += ',';
    csv += manes::format_double(manes::potential(p, y));
    csv += ',';
    csv += manes::format_double(manes::potential_deriv(p, y));
    csv += ',';
    csv += manes::format_double(mix.pdf(y));
    csv += '\n';
  }
  manes::write_text_file(o.out, csv);
}

json roots_to_json(const manes::SelfConsistencyResult& res) {
  json arr = json::array();
  for (const manes::EquilibriumRoot& r : res.roots) {
    json e;
    e["m"] = r.m;
    e["free_energy"] = r.free_energy;
    e["stability"] =
        r.stability == manes::Stability::Stable ? "stable" : "unstable";
    arr.push_back(e);
  }
  return arr;
}

void run_selfconsist(const CommonOpts& o) {
  const json cfg = resolve(o,
                           {"mu1", "mu2", "sigma1", "sigma2", "a", "T", "h",
                            "g", "B"},
                           "selfconsist");
  const manes::NesParams p = params_from(cfg);
  const double g = num(cfg, "g");
  const double B = num_or(cfg, "B", 0.0);
  const manes::SelfConsistencyResult res =
      manes::solve_self_consistency(p, g, B);
  json art;
  art["meta"] = meta_block(cfg);
  art["roots"] = roots_to_json(res);
  emit_json(o.out, art);
}

void run_free_energy(const CommonOpts& o) {
  const json cfg = resolve(o,
                           {"mu1", "mu2", "sigma1", "sigma2", "a", "T", "h",
                            "g", "B", "m_min", "m_max", "n"},
                           "free-energy");
  const manes::NesParams p = params_from(cfg);
  const double g = num(cfg, "g");
  const double B = num_or(cfg, "B", 0.0);
  const double smax = std::max(p.sigma1, p.sigma2) * std::sqrt(p.T);
  const double span = std::max(std::fabs(p.mu1), std::fabs(p.mu2)) * p.T +
                      5.0 * smax;
  const double lo = num_or(cfg, "m_min", -span);
  const double hi = num_or(cfg, "m_max", span);
  const int n = static_cast<int>(num_or(cfg, "n", 401));

  const std::vector<double> grid = linspace(lo, hi, n);
  std::string csv = csv_meta(cfg) + "m,F,rhs\n";
  std::string body;
  for (double m : grid) {
    body += manes::format_double(m);
    body += ',';
    body += manes::format_double(manes::free_energy(p, g, m, B));
    body += ',';
    body += manes::format_double(manes::self_consistency_rhs(p, g, m, B));
    body += '\n';
  }
  manes::write_text_file(o.out, csv + body);
}

void run_bifurcate(const CommonOpts& o) {
  const json cfg = resolve(
      o, {"mu", "sigma", "T", "g", "h_min", "h_max", "n"}, "bifurcate");
  const manes::NesParams p = symmetric_from(cfg, 0.1);
  const double g = num(cfg, "g");
  const std::vector<double> h_grid =
      linspace(num(cfg, "h_min"), num(cfg, "h_max"),
               static_cast<int>(num_or(cfg, "n", 101)));

  const std::vector<manes::BifurcationPoint> sweep =
      manes::bifurcation_sweep(p, g, h_grid);
  std::string csv = csv_meta(cfg) + "h,root_count,m1,m2,m3,status\n";
  for (const manes::BifurcationPoint& bp : sweep) {
    csv += manes::format_double(bp.h);
    csv += ',';
    if (bp.ok) {
      const std::size_t k = bp.result.roots.size();
      csv += std::to_string(k);
      for (std::size_t i = 0; i < 3; ++i) {
        csv += ',';
        if (i < k) csv += manes::format_double(bp.result.roots[i].m);
      }
      csv += ",ok\n";
    } else {
      csv += "0,,,," + bp.error + "\n";
    }
  }
  manes::write_text_file(o.out, csv);
}

void run_phase_diagnostics(const CommonOpts& o) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg, {"mu", "sigma", "T", "g", "h_list"}, "phase-diagnostics");
  const manes::NesParams p = symmetric_from(cfg, 0.1);
  const double g = num(cfg, "g");
  std::vector<double> h_list;
  if (cfg.contains("h_list")) {
    if (!cfg.at("h_list").is_array())
      throw std::runtime_error("h_list must be an array");
    for (const auto& v : cfg.at("h_list")) h_list.push_back(v.get<double>());
  }

  const manes::CriticalPoint crit = manes::critical_volatility(p, g);
  const manes::BetaFit fit = manes::beta_exponent(p, g);
  json art;
  art["meta"] = meta_block(cfg);
  art["h_c"] = crit.h_c;
  art["overlap_b"] = crit.b;
  art["beta_fit"] = {{"beta", fit.beta},
                     {"r2", fit.r2},
                     {"intercept", fit.intercept},
                     {"closed_coeff", fit.closed_coeff},
                     {"n_points", fit.n_points}};
  art["specific_heat_jump"] = manes::specific_heat_jump(p, g);
  json sus = json::array();
  for (double h : h_list) {
    json e;
    e["h"] = h;
    e["chi"] = manes::susceptibility(p, g, h);
    sus.push_back(e);
  }
  art["susceptibility"] = sus;
  emit_json(o.out, art);
}

void run_hetero(const CommonOpts& o) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg, {"g", "h", "T", "assets"}, "hetero");
  manes::HeterogeneousMarket mkt;
  mkt.g = num(cfg, "g");
  mkt.h = num(cfg, "h");
  mkt.T = num_or(cfg, "T", 1.0);
  if (!cfg.contains("assets") || !cfg.at("assets").is_array())
    throw std::runtime_error("hetero config needs an assets array");
  for (const auto& aj : cfg.at("assets")) {
    check_keys(aj, {"mu", "sigma", "B"}, "assets[]");
    manes::AssetParams ap;
    ap.mu = num(aj, "mu");
    ap.sigma = num(aj, "sigma");
    ap.B = num_or(aj, "B", 0.0);
    mkt.assets.push_back(ap);
  }
  as_input([&] { mkt.validate(); return 0; });

  const manes::LinearResponse lr = manes::linear_response(mkt);
  const std::vector<double> m = manes::solve_local_mean_fields(mkt);
  double mbar = 0.0;
  for (double v : m) mbar += v;
  mbar /= static_cast<double>(m.size());

  json art;
  art["meta"] = meta_block(cfg);
  art["A"] = lr.A;
  art["mean_A"] = lr.mean_A;
  art["m"] = m;
  art["market_mean"] = mbar;
  json rows = json::array();
  for (int i = 0; i < lr.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < lr.n; ++j) s += lr.chi[i * lr.n + j];
    rows.push_back(s);
  }
  art["chi_row_sum"] = rows;
  try {
    const manes::FluctuationReport fr = manes::fluctuation_response_check(mkt);
    art["fluctuation"] = {{"A", fr.A},
                          {"mean_cov_from_A", fr.mean_cov_from_A},
                          {"mean_cov_from_chi", fr.mean_cov_from_chi},
                          {"mean_cov_matrix", fr.mean_cov_matrix},
                          {"sigma_M", fr.sigma_M},
                          {"rho_M", fr.rho_M},
                          {"rho_M_proxy", fr.rho_M_proxy}};
  } catch (const manes::ConstraintViolation&) {
    // heterogeneous assets; the homogeneous report does not apply
  }
  emit_json(o.out, art);
}

manes::InitSpec init_from(const json& j) {
  manes::InitSpec init;
  if (!j.is_object()) throw std::runtime_error("init must be an object");
  check_keys(j, {"kind", "mean", "sd"}, "init");
  const std::string kind = j.value("kind", std::string("point"));
  if (kind == "point")
    init.kind = manes::InitSpec::Kind::PointMass;
  else if (kind == "gaussian")
    init.kind = manes::InitSpec::Kind::Gaussian;
  else
    throw std::runtime_error("init.kind must be point or gaussian");
  init.mean = num_or(j, "mean", 0.0);
  init.sd = num_or(j, "sd", 0.0);
  return init;
}

void run_simulate(const CommonOpts& o, const std::string& series_path) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg,
             {"mu1", "mu2", "sigma1", "sigma2", "a", "T", "h", "g",
              "n_particles", "dt", "steps", "seed", "burn_in", "record_every",
              "init"},
             "simulate");
  const manes::NesParams p = params_from(cfg);
  const double g = num(cfg, "g");
  manes::SimConfig sc;
  sc.n_particles = static_cast<int>(num_or(cfg, "n_particles", 500));
  sc.dt = num_or(cfg, "dt", 0.0);
  sc.steps = static_cast<long long>(num_or(cfg, "steps", 10000));
  sc.seed = static_cast<std::uint64_t>(num_or(cfg, "seed", 1));
  sc.burn_in = static_cast<long long>(num_or(cfg, "burn_in", -1));
  sc.record_every = static_cast<int>(num_or(cfg, "record_every", 10));
  if (cfg.contains("init")) sc.init = init_from(cfg.at("init"));

  const manes::TrajectoryStats st = manes::simulate_particles(p, g, sc);

  json art;
  art["meta"] = meta_block(cfg);
  art["dt"] = st.dt;
  art["steps"] = st.steps;
  art["m_time_avg"] = st.m_time_avg;
  art["var_time_avg"] = st.var_time_avg;
  art["m_hat_variance"] = st.m_hat_variance;
  art["mean_offdiag_cov"] = st.mean_offdiag_cov;
  art["m_std_error"] = st.m_std_error;
  std::string csv;
  if (!series_path.empty()) {
    csv = csv_meta(cfg) + "t,m_hat,var_hat\n";
    for (std::size_t i = 0; i < st.times.size(); ++i) {
      csv += manes::format_double(st.times[i]);
      csv += ',';
      csv += manes::format_double(st.m_hat[i]);
      csv += ',';
      csv += manes::format_double(st.var_hat[i]);
      csv += '\n';
    }
  }
  emit_json(o.out, art);
  if (!series_path.empty()) manes::write_text_file(series_path, csv);
}

void run_mckean_vlasov(const CommonOpts& o, const std::string& density_path) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg,
             {"mu1", "mu2", "sigma1", "sigma2", "a", "T", "h", "g", "y_min",
              "y_max", "n_cells", "dt", "record_every", "t_end", "init"},
             "mckean-vlasov");
  const manes::NesParams p = params_from(cfg);
  const double g = num(cfg, "g");
  manes::GridConfig gc;
  gc.y_min = num_or(cfg, "y_min", 0.0);
  gc.y_max = num_or(cfg, "y_max", 0.0);
  gc.n_cells = static_cast<int>(num_or(cfg, "n_cells", 400));
  gc.dt = num_or(cfg, "dt", 0.0);
  gc.record_every = static_cast<int>(num_or(cfg, "record_every", 0));
  const double t_end = num(cfg, "t_end");

  // Mirror the solver's automatic domain to discretize the init density.
  double lo = gc.y_min, hi = gc.y_max;
  const double smax = std::max(p.sigma1, p.sigma2) * std::sqrt(p.T);
  if (!(hi > lo)) {
    lo = std::min(p.mu1, p.mu2) * p.T - 10.0 * smax;
    hi = std::max(p.mu1, p.mu2) * p.T + 10.0 * smax;
  }
  const double dy = (hi - lo) / gc.n_cells;
  std::vector<double> y(gc.n_cells), init(gc.n_cells);
  for (int j = 0; j < gc.n_cells; ++j) y[j] = lo + (j + 0.5) * dy;

  std::string kind = "stationary";
  double imean = 0.0, isd = 0.1;
  if (cfg.contains("init")) {
    const json& ij = cfg.at("init");
    check_keys(ij, {"kind", "mean", "sd"}, "init");
    kind = ij.value("kind", kind);
    imean = num_or(ij, "mean", imean);
    isd = num_or(ij, "sd", isd);
  }
  if (kind == "stationary") {
    const manes::MixtureStationary mix = manes::stationary_density(p);
    for (int j = 0; j < gc.n_cells; ++j) init[j] = mix.pdf(y[j]);
  } else if (kind == "gaussian") {
    if (!(isd > 0.0)) throw std::runtime_error("init.sd must be positive");
    for (int j = 0; j < gc.n_cells; ++j) {
      const double z = (y[j] - imean) / isd;
      init[j] = std::exp(-0.5 * z * z);
    }
  } else {
    throw std::runtime_error("init.kind must be stationary or gaussian");
  }
  double mass = 0.0;
  for (double v : init) mass += v * dy;
  for (double& v : init) v /= mass;

  const manes::McKeanVlasovResult res =
      manes::evolve_mckean_vlasov(p, g, gc, init, t_end);

  json art;
  art["meta"] = meta_block(cfg);
  art["first_moment"] = res.first_moment;
  art["mass_error_max"] = res.mass_error_max;
  art["dt"] = res.dt;
  art["steps"] = res.steps;
  std::string csv;
  if (!density_path.empty()) {
    csv = csv_meta(cfg) + "y,density\n";
    for (std::size_t j = 0; j < res.y.size(); ++j) {
      csv += manes::format_double(res.y[j]);
      csv += ',';
      csv += manes::format_double(res.density[j]);
      csv += '\n';
    }
  }
  emit_json(o.out, art);
  if (!density_path.empty()) manes::write_text_file(density_path, csv);
}

void run_calibrate(const CommonOpts& o, const std::string& quotes_path,
                   const std::string& side_name,
                   const std::string& potential_path) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg, {"h", "delta_sigma2", "n_starts", "seed", "max_evals"},
             "calibrate");
  manes::CalibrationConfig cc;
  cc.h = num_or(cfg, "h", cc.h);
  cc.delta_sigma2 = num_or(cfg, "delta_sigma2", cc.delta_sigma2);
  cc.n_starts = static_cast<int>(num_or(cfg, "n_starts", cc.n_starts));
  cc.seed = static_cast<std::uint64_t>(num_or(cfg, "seed", 1));
  cc.max_evals = static_cast<int>(num_or(cfg, "max_evals", cc.max_evals));

  manes::QuoteSide side;
  if (side_name == "calls")
    side = manes::QuoteSide::Calls;
  else if (side_name == "puts")
    side = manes::QuoteSide::Puts;
  else
    throw std::runtime_error("--side must be calls or puts");

  const std::vector<manes::OptionQuote> chain =
      as_input([&] { return manes::read_quote_csv(quotes_path); });

  json resolved = cfg;
  resolved["quotes"] = quotes_path;
  resolved["side"] = side_name;

  const manes::CalibrationResult res = manes::calibrate(chain, side, cc);

  json art;
  art["meta"] = meta_block(resolved);
  art["barred"] = {{"mu1", res.barred.mu1},
                   {"mu2", res.barred.mu2},
                   {"sigma1", res.barred.sigma1},
                   {"sigma2", res.barred.sigma2},
                   {"a", res.barred.a}};
  art["h"] = res.h;
  art["T"] = res.T;
  art["g"] = res.g;
  art["g_valid"] = res.g_valid;
  art["m"] = res.m;
  art["mape"] = res.mape;
  art["bare_valid"] = res.bare_valid;
  if (res.bare_valid)
    art["bare"] = {{"mu1", res.bare.mu1},     {"mu2", res.bare.mu2},
                   {"sigma1", res.bare.sigma1}, {"sigma2", res.bare.sigma2},
                   {"a", res.bare.a},         {"T", res.bare.T},
                   {"h", res.bare.h}};
  art["starts_used"] = res.starts_used;
  art["evaluations"] = res.evaluations;

  std::string csv;
  if (!potential_path.empty()) {
    manes::NesParams pb;
    pb.mu1 = res.barred.mu1;
    pb.mu2 = res.barred.mu2;
    pb.sigma1 = res.barred.sigma1;
    pb.sigma2 = res.barred.sigma2;
    pb.a = res.barred.a;
    pb.T = res.T;
    pb.h = res.h;
    const double smax = std::max(pb.sigma1, pb.sigma2) * std::sqrt(pb.T);
    const std::vector<double> grid =
        linspace(std::min(pb.mu1, pb.mu2) * pb.T - 4.0 * smax,
                 std::max(pb.mu1, pb.mu2) * pb.T + 4.0 * smax, 401);
    csv = csv_meta(resolved) + "y,V_eff\n";
    for (double yv : grid) {
      csv += manes::format_double(yv);
      csv += ',';
      csv += manes::format_double(manes::potential(pb, yv));
      csv += '\n';
    }
  }
  emit_json(o.out, art);
  if (!potential_path.empty()) manes::write_text_file(potential_path, csv);
}

void run_price(const CommonOpts& o) {
  json cfg = parse_config_file(o.config);
  apply_overrides(cfg, o.sets);
  check_keys(cfg,
             {"mu1", "mu2", "sigma1", "sigma2", "a", "T", "h", "spot", "rate",
              "type", "strikes"},
             "price");
  const manes::NesParams p = params_from(cfg);
  const double spot = num(cfg, "spot");
  const double rate = num_or(cfg, "rate", 0.0);
  const std::string type = cfg.value("type", std::string("C"));
  if (type != "C" && type != "P")
    throw std::runtime_error("type must be C or P");
  const manes::OptionType ot =
      type == "C" ? manes::OptionType::Call : manes::OptionType::Put;
  if (!cfg.contains("strikes") || !cfg.at("strikes").is_array())
    throw std::runtime_error("price config needs a strikes array");
  std::vector<double> strikes;
  for (const auto& v : cfg.at("strikes")) strikes.push_back(v.get<double>());

  json rows = json::array();
  for (double k : strikes) {
    json e;
    e["strike"] = k;
    e["price"] = manes::price_european(p, spot, rate, k, ot);
    rows.push_back(e);
  }
  json art;
  art["meta"] = meta_block(cfg);
  art["type"] = type;
  art["prices"] = rows;
  emit_json(o.out, art);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field market model toolkit"};
  app.require_subcommand(1);

  CommonOpts potential_o, selfconsist_o, free_energy_o, bifurcate_o, phase_o,
      hetero_o, simulate_o, mckean_o, calibrate_o, price_o;
  std::string series_path, density_path, quotes_path, side_name,
      potential_path;

  auto add_common = [](CLI::App* sc, CommonOpts& o, bool config_required) {
    CLI::Option* c = sc->add_option("--config", o.config, "JSON config file");
    if (config_required) c->required();
    sc->add_option("--out", o.out, "output artifact path")->required();
    sc->add_option("--set", o.sets,
                   "numeric override key=value, repeatable");
  };

  CLI::App* sc;
  sc = app.add_subcommand("potential", "potential, gradient and density grid");
  add_common(sc, potential_o, true);
  sc->callback([&] { run_potential(potential_o); });

  sc = app.add_subcommand("selfconsist", "equilibrium mean log-returns");
  add_common(sc, selfconsist_o, true);
  sc->callback([&] { run_selfconsist(selfconsist_o); });

  sc = app.add_subcommand("free-energy", "free energy and fixed-point map grid");
  add_common(sc, free_energy_o, true);
  sc->callback([&] { run_free_energy(free_energy_o); });

  sc = app.add_subcommand("bifurcate", "root structure across volatility");
  add_common(sc, bifurcate_o, true);
  sc->callback([&] { run_bifurcate(bifurcate_o); });

  sc = app.add_subcommand("phase-diagnostics",
                          "critical point, exponent fit, response");
  add_common(sc, phase_o, true);
  sc->callback([&] { run_phase_diagnostics(phase_o); });

  sc = app.add_subcommand("hetero", "heterogeneous market linear response");
  add_common(sc, hetero_o, true);
  sc->callback([&] { run_hetero(hetero_o); });

  sc = app.add_subcommand("simulate", "interacting particle simulation");
  add_common(sc, simulate_o, true);
  sc->add_option("--series", series_path, "CSV time series path");
  sc->callback([&] { run_simulate(simulate_o, series_path); });

  sc = app.add_subcommand("mckean-vlasov", "density evolution to equilibrium");
  add_common(sc, mckean_o, true);
  sc->add_option("--density", density_path, "CSV final density path");
  sc->callback([&] { run_mckean_vlasov(mckean_o, density_path); });

  sc = app.add_subcommand("calibrate", "fit the mixture to a quote chain");
  add_common(sc, calibrate_o, false);
  sc->add_option("--quotes", quotes_path, "quote chain CSV")->required();
  sc->add_option("--side", side_name, "calls or puts")->required();
  sc->add_option("--potential", potential_path,
                 "CSV of the fitted effective potential");
  sc->callback(
      [&] { run_calibrate(calibrate_o, quotes_path, side_name, potential_path); });

  sc = app.add_subcommand("price", "closed-form option prices");
  add_common(sc, price_o, true);
  sc->callback([&] { run_price(price_o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  } catch (const manes::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
