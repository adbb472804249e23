#pragma once

#include <random>

#include "manes/nes_params.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Generic valid parameter set; ranges keep renormalization well conditioned
/// for couplings up to about 1.5.
inline manes::NesParams random_params(std::mt19937_64& rng) {
  manes::NesParams p;
  p.mu1 = uniform(rng, -1.2, 1.2);
  p.mu2 = uniform(rng, -1.2, 1.2);
  p.sigma1 = uniform(rng, 0.08, 0.9);
  p.sigma2 = uniform(rng, 0.08, 0.9);
  p.a = uniform(rng, 0.08, 0.92);
  p.T = uniform(rng, 0.3, 1.5);
  p.h = uniform(rng, 0.1, 0.7);
  return p;
}

}  // namespace testsupport
