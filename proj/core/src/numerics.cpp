#include "manes/numerics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace manes {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need matching vectors, size >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_lo, double f_hi) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw std::invalid_argument("bisect: endpoints do not bracket a root");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

std::vector<double> clamp_box(std::vector<double> v, const std::vector<double>& lo,
                              const std::vector<double>& hi) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
  return v;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<double>& step,
    const std::vector<double>& lo, const std::vector<double>& hi,
    int max_evals, double f_tol) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  res.evaluations = 0;

  auto eval = [&](const std::vector<double>& v) {
    ++res.evaluations;
    return f(v);
  };

  std::vector<std::vector<double>> simplex(n + 1);
  std::vector<double> fv(n + 1);
  simplex[0] = clamp_box(x0, lo, hi);
  fv[0] = eval(simplex[0]);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = simplex[0];
    v[i] += step[i];
    if (v[i] > hi[i]) v[i] = simplex[0][i] - step[i];
    simplex[i + 1] = clamp_box(v, lo, hi);
    fv[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  while (res.evaluations < max_evals) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[n];
    if (fv[worst] - fv[best] < f_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (order[k] == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i)
        v[i] = centroid[i] + coef * (simplex[worst][i] - centroid[i]);
      return clamp_box(std::move(v), lo, hi);
    };

    auto xr = blend(-1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      auto xe = blend(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = std::move(xe);
        fv[worst] = fe;
      } else {
        simplex[worst] = std::move(xr);
        fv[worst] = fr;
      }
    } else if (fr < fv[order[n - 1]]) {
      simplex[worst] = std::move(xr);
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      auto xc = blend(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = std::move(xc);
        fv[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= n; ++k) {
          if (order[k] == best) continue;
          auto& v = simplex[order[k]];
          for (std::size_t i = 0; i < n; ++i)
            v[i] = simplex[best][i] + 0.5 * (v[i] - simplex[best][i]);
          fv[order[k]] = eval(v);
          if (res.evaluations >= max_evals) break;
        }
      }
    }
  }

  std::size_t ibest = 0;
  for (std::size_t k = 1; k <= n; ++k)
    if (fv[k] < fv[ibest]) ibest = k;
  res.x = simplex[ibest];
  res.fx = fv[ibest];
  return res;
}

}  // namespace manes
