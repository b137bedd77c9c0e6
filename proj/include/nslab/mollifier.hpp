#pragma once

#include <Eigen/Dense>

#include "nslab/field.hpp"

namespace nslab {

// Standard smooth bump supported on the unit ball, normalized to unit mass:
// eta(x) = C exp(1/(|x|^2 - 1)) for |x| < 1. eta_eps(x) = eps^{-3} eta(x/eps).
double mollifier_constant();            // the C above, cached
double mollifier_eta(double r);         // radial profile, includes C
double mollifier_eta_l2();              // ||eta||_2, cached
double mollifier_hat(double rho);       // radial Fourier transform, hat(0) = 1

// Multiplier realizing convolution with eta_eps on this grid. When the grid
// resolves the bump (eps >= 3h) this is the DFT of the sampled kernel,
// renormalized to unit discrete mass: a positive discrete convolution, so the
// Lp contractions hold exactly in the grid norms. Below that the sampled bump
// degenerates and the continuum transform eta_hat(eps |xi|) is used instead.
RArray mollifier_multiplier(const GridSpec& g, double eps);

void mollify(SpectralScalar& s, double eps);
void mollify(SpectralVector& u, double eps);

}  // namespace nslab
