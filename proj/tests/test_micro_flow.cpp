#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "manes/errors.hpp"
#include "manes/micro_flow.hpp"
#include "support/checks.hpp"
#include "support/quadrature.hpp"

using namespace manes;
using testsupport::adaptive_simpson;
using testsupport::close;

namespace {

// Odd/even Taylor coefficients of F at 0 from three radii.  Solves the
// 3x3 Vandermonde in y^2; truncation enters at the seventh order.
struct TaylorFit {
  double c1, c2, c3;  // xi, rho, zeta of F = c1 y + c2 y^2 + c3 y^3 + ...
};

TaylorFit fit_taylor(const std::function<double(double)>& F) {
  const std::array<double, 3> r = {0.02, 0.04, 0.06};
  double Ao[3][3], bo[3], Ae[3][3], be[3];
  for (int i = 0; i < 3; ++i) {
    const double y = r[i];
    const double fp = F(y), fm = F(-y);
    const double odd = 0.5 * (fp - fm), even = 0.5 * (fp + fm);
    Ao[i][0] = y;
    Ao[i][1] = y * y * y;
    Ao[i][2] = Ao[i][1] * y * y;
    bo[i] = odd;
    Ae[i][0] = y * y;
    Ae[i][1] = Ae[i][0] * y * y;
    Ae[i][2] = Ae[i][1] * y * y;
    be[i] = even;
  }
  const auto solve3 = [](double A[3][3], double b[3]) {
    for (int k = 0; k < 3; ++k) {
      int piv = k;
      for (int i = k + 1; i < 3; ++i)
        if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
      std::swap(A[k][0], A[piv][0]);
      std::swap(A[k][1], A[piv][1]);
      std::swap(A[k][2], A[piv][2]);
      std::swap(b[k], b[piv]);
      for (int i = k + 1; i < 3; ++i) {
        const double f = A[i][k] / A[k][k];
        for (int j = k; j < 3; ++j) A[i][j] -= f * A[k][j];
        b[i] -= f * b[k];
      }
    }
    std::array<double, 3> x{};
    for (int k = 2; k >= 0; --k) {
      double s = b[k];
      for (int j = k + 1; j < 3; ++j) s -= A[k][j] * x[j];
      x[k] = s / A[k][k];
    }
    return x;
  };
  const auto xo = solve3(Ao, bo);
  const auto xe = solve3(Ae, be);
  return {xo[0], xe[0], xo[1]};
}

FlowParams random_flow(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FlowParams fp;
  fp.phi = 0.3 + 0.9 * u(rng);
  fp.lambda = 0.2 + 0.8 * u(rng);
  fp.kappa = 0.5 * u(rng);
  fp.eta = 0.3 + 1.2 * u(rng);
  fp.beta_impact = 0.5 + u(rng);
  fp.a_hat = 0.6 * u(rng) - 0.3;
  fp.abar_tau = 0.4 * u(rng) - 0.2;
  return fp;
}

}  // namespace

TEST_CASE("soft absolute value reference points") {
  REQUIRE(soft_abs(2.0, 0.0) == 0.0);
  REQUIRE(close(soft_abs(2.0, 0.1), 0.0099340, 1e-4));
  REQUIRE(close(soft_abs(50.0, 1.0), 0.9861371, 1e-6));
  REQUIRE(close(soft_abs(50.0, 1.0), 1.0, 0.02));
}

TEST_CASE("soft absolute value hugs |z| from below within log2 over beta") {
  for (double beta : {0.5, 2.0, 10.0, 200.0}) {
    const double cap = std::log(2.0) / beta;
    for (int i = -60; i <= 60; ++i) {
      const double z = 0.1 * i;
      const double gap = std::fabs(z) - soft_abs(beta, z);
      REQUIRE(gap >= -1e-15);
      REQUIRE(gap <= cap + 1e-15);
      REQUIRE(soft_abs(beta, z) == soft_abs(beta, -z));
    }
  }
  // Overflow-safe far field.
  REQUIRE(close(soft_abs(3.0, 1e6), 1e6 - std::log(2.0) / 3.0, 1e-12));
  REQUIRE(std::isfinite(soft_abs(700.0, 5.0)));
}

TEST_CASE("flow rate polynomial and joint oddness") {
  FlowParams fp;
  fp.phi = 1.0;
  fp.lambda = 2.0;
  fp.kappa = 0.0;
  REQUIRE(flow_rate(fp, 0.0, 0.0) == 0.0);
  REQUIRE(close(flow_rate(fp, 0.5, 0.0), 0.75, 1e-15));
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const FlowParams q = random_flow(rng);
    const double y = u(rng), m = u(rng);
    REQUIRE(flow_rate(q, -y, -m) == -flow_rate(q, y, m));
  }
}

TEST_CASE("impact shape: zeros, peak, symmetry") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    const FlowParams fp = random_flow(rng);
    const double b = fp.b();
    REQUIRE(impact(fp, 0.0) == 0.0);
    REQUIRE(impact(fp, 2.0 * b) == 0.0);
    const double peak = impact(fp, b);
    REQUIRE(close(peak, fp.eta * soft_abs(fp.beta_impact, b), 1e-14));
    for (int i = -40; i <= 40; ++i)
      REQUIRE(impact(fp, b + 0.1 * i) <= peak + 1e-14);
  }
}

TEST_CASE("impact tends to the shifted negative absolute value") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 50; ++t) {
    const FlowParams fp = random_flow(rng);
    const double b = fp.b();
    const double cap = fp.eta * std::log(2.0) / fp.beta_impact;
    for (double a : {-30.0, -5.0, 0.7, 12.0}) {
      const double ideal = -fp.eta * (std::fabs(a - b) - std::fabs(b));
      REQUIRE(std::fabs(impact(fp, a) - ideal) <= cap + 1e-14);
    }
  }
}

TEST_CASE("combined drift cubic asymptotes") {
  FlowParams fp;
  fp.phi = 0.1;
  fp.lambda = 1.0;
  fp.kappa = 0.0;
  fp.eta = 2.0;
  fp.beta_impact = 2.0;
  fp.a_hat = 0.2;
  const double up = combined_drift(fp, 10.0, 0.0);
  REQUIRE(up < 0.0);  // eta > 1 confines from above
  REQUIRE(close(up, (1.0 - fp.eta) * fp.lambda * 1000.0, 5e-3));
  const double dn = combined_drift(fp, -10.0, 0.0);
  REQUIRE(close(dn, (1.0 + fp.eta) * fp.lambda * -1000.0, 5e-3));
}

TEST_CASE("exact Taylor coefficients match a numerical fit") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 40; ++t) {
    const FlowParams fp = random_flow(rng);
    const DriftCoeffs dc = drift_coeffs_exact(fp);
    const TaylorFit fit =
        fit_taylor([&](double y) { return combined_drift(fp, y, y); });
    REQUIRE(close(fit.c1, dc.xi, 2e-6, 1e-8));
    REQUIRE(close(fit.c2, dc.rho, 2e-6, 1e-8));
    REQUIRE(close(fit.c3, dc.zeta, 2e-5, 1e-6));
    // Mean channel: response of the drift to the market mean at the origin.
    const double d = 1e-6;
    const double fd = (combined_drift(fp, 0.0, d) -
                       combined_drift(fp, 0.0, -d)) / (2.0 * d);
    REQUIRE(close(fd, dc.g, 1e-7, 1e-10));
  }
}

TEST_CASE("published coefficient algebra agrees at zero headroom without herding") {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 20; ++t) {
    FlowParams fp = random_flow(rng);
    fp.kappa = 0.0;
    fp.abar_tau = fp.a_hat;  // b = 0
    const DriftCoeffs printed = drift_coeffs(fp);
    const DriftCoeffs exact = drift_coeffs_exact(fp);
    REQUIRE(close(printed.xi, exact.xi, 1e-14));
    REQUIRE(close(printed.rho, exact.rho, 1e-14));
    REQUIRE(close(printed.zeta, exact.zeta, 1e-14));
    REQUIRE(printed.g == 0.0);
    const TaylorFit fit =
        fit_taylor([&](double y) { return combined_drift(fp, y, y); });
    REQUIRE(close(fit.c1, printed.xi, 1e-6, 1e-9));
    REQUIRE(close(fit.c2, printed.rho, 2e-6, 1e-8));
  }
  // Away from that point the truncated algebra deviates at second order in
  // the headroom; the exact coefficients stay authoritative.
  FlowParams fp = random_flow(rng);
  fp.kappa = 0.0;
  fp.a_hat = fp.abar_tau + 0.3 / fp.beta_impact;
  REQUIRE_FALSE(close(drift_coeffs(fp).rho, drift_coeffs_exact(fp).rho, 1e-4));
}

TEST_CASE("impact off reduces coefficients to the bare flow") {
  FlowParams fp;
  fp.phi = 0.7;
  fp.lambda = 0.4;
  fp.kappa = 0.2;
  fp.eta = 1e-300;  // effectively off while satisfying eta > 0
  fp.beta_impact = 1.0;
  const DriftCoeffs dc = drift_coeffs(fp);
  REQUIRE(close(dc.xi, 0.9, 1e-12));
  REQUIRE(close(dc.rho, 0.0, 0.0, 1e-12));
  REQUIRE(close(dc.zeta, 0.4, 1e-12));
  REQUIRE(close(dc.g, 0.2, 1e-12));
}

TEST_CASE("negative drift integral matches the quartic potential sketch") {
  FlowParams fp;
  fp.phi = 0.7;
  fp.lambda = 0.6;
  fp.kappa = 0.2;
  fp.eta = 0.6;
  fp.beta_impact = 0.8;
  fp.a_hat = 0.25;
  fp.abar_tau = 0.1;
  const DriftCoeffs dc = drift_coeffs_exact(fp);
  const auto drift = [&](double s) { return combined_drift(fp, s, s); };
  for (double y : {-0.3, -0.18, -0.07, 0.11, 0.22, 0.3}) {
    const double U = y >= 0.0 ? -adaptive_simpson(drift, 0.0, y, 1e-12)
                              : adaptive_simpson(drift, y, 0.0, 1e-12);
    const double poly = -0.5 * dc.xi * y * y - dc.rho / 3.0 * y * y * y -
                        0.25 * dc.zeta * y * y * y * y;
    // The residual is the fifth-order Taylor remainder of the integral.
    REQUIRE(close(U, poly, 0.0, 0.1 * std::pow(std::fabs(y), 5)));
  }
}

TEST_CASE("flow parameter validation") {
  FlowParams fp;
  fp.phi = -0.1;
  REQUIRE_THROWS_AS(fp.validate(), ConstraintViolation);
  fp.phi = 0.1;
  fp.eta = 0.0;
  REQUIRE_THROWS_AS(fp.validate(), ConstraintViolation);
  fp.eta = 1.0;
  fp.beta_impact = 0.0;
  REQUIRE_THROWS_AS(fp.validate(), ConstraintViolation);
  REQUIRE_THROWS_AS(soft_abs(0.0, 1.0), ConstraintViolation);
}
