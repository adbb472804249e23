#pragma once

#include "manes/nes_params.hpp"

namespace manes {

MixtureStationary stationary_density(const NesParams& p);

/// log of the two-component mixture ground state Psi_0, normalization included.
double log_psi0(const NesParams& p, double y);

/// Offset V0 making min_y V(y) = 0; grid scan plus golden-section refinement.
double potential_offset(const NesParams& p);

/// V(y) = -h^2 log Psi_0(y) + V0, confining and asymptotically harmonic.
double potential(const NesParams& p, double y);

/// dV/dy, a responsibility-weighted sum of the two harmonic branches.
double potential_deriv(const NesParams& p, double y);

bool is_symmetric(const NesParams& p, double tol = 1e-12);

/// Threshold is relative: |eps| beyond threshold*scale clears linearization_ok.
SymmetricDecomposition symmetrize(const NesParams& p, double threshold = 0.2);

/// Absorbs g(y^2/2 - m y) - B y into the potential.  Barred variances shrink,
/// sigma_bar_k^2 = h^2 sigma_k^2 / (h^2 + g sigma_k^2 T); exact for any g >= 0.
RenormalizedParams renormalize_with_field(const NesParams& p, double g,
                                          double m, double B);

RenormalizedParams renormalize(const NesParams& p, double g, double m);

/// Inverse map; requires g < h^2/(sigma_bar_k^2 T) or throws
/// ConstraintViolation.  renormalize(invert(rp)) reproduces rp.
NesParams invert_renormalization(const RenormalizedParams& rp, double g,
                                 double m, double h, double T);

}  // namespace manes
