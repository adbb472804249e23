#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace testsupport {

inline bool close(double a, double b, double rtol, double atol = 0.0) {
  return std::fabs(a - b) <=
         rtol * std::max(std::fabs(a), std::fabs(b)) + atol;
}

/// Kolmogorov-Smirnov sup distance of samples against a reference cdf.
template <typename Cdf>
double ks_distance(std::vector<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(c - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace testsupport
