#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "manes/gm_potential.hpp"
#include "manes/nes_params.hpp"

namespace manes {

enum class OptionType { Call, Put };
enum class QuoteSide { Calls, Puts };

struct OptionQuote {
  std::chrono::sys_days quote_date;
  std::chrono::sys_days expiry_date;
  OptionType type = OptionType::Call;
  double strike = 0.0;
  double mid_price = 0.0;
  double spot = 0.0;
  double rate = 0.0;

  void validate() const;
  double year_fraction() const;  // ACT/365
};

/// Closed-form European price under the stationary mixture terminal density,
/// one lognormal term per component, discounted at the quoted rate.
double price_european(const NesParams& barred, double spot, double rate,
                      double strike, OptionType type);

/// First moment of the effective stationary mixture, written with the
/// explicit third-component weight split.
double equilibrium_return(const RenormalizedParams& rp, double T);

/// g = h^2 / (2 sigma_M^2 T) with sigma_M^2 = max_k(sigma_k^2/2) + margin.
double estimate_coupling(double sigma1_bar, double sigma2_bar, double h,
                         double T, double delta_sigma2 = 0.05);

struct CalibrationConfig {
  double h = 0.2;     // fixed noise scale; the stationary pricer cannot identify it
  double delta_sigma2 = 0.05;
  int n_starts = 64;  // quasi-random multistart count
  std::uint64_t seed = 1;
  int max_evals = 4000;  // local refinement budget per start
};

struct CalibrationResult {
  RenormalizedParams barred;  // canonicalized, mu1 >= mu2
  double h = 0.0;
  double T = 0.0;
  double g = 0.0;
  bool g_valid = false;  // renormalization denominators stay positive at g
  double m = 0.0;        // equilibrium log-return at the fitted weights
  double mape = 0.0;     // mean absolute relative price error (fraction)
  NesParams bare;        // defined only when bare_valid
  bool bare_valid = false;
  int starts_used = 0;
  long long evaluations = 0;
};

/// Fit the barred mixture to one side of a single-expiry quote chain by
/// minimizing MAPE, then derive g, m, and bare parameters.
CalibrationResult calibrate(const std::vector<OptionQuote>& chain,
                            QuoteSide side, const CalibrationConfig& cfg = {});

}  // namespace manes
