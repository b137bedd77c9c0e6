#pragma once

#include "nslab/field.hpp"

namespace nslab {

// Diagonal Fourier-side operators. Conventions:
//  - d/dx_a is the multiplier 2 pi i xi_a with the unpaired Nyquist plane
//    zeroed (an odd multiplier there would break conjugate symmetry);
//  - -Laplacian is 4 pi^2 |xi|^2;
//  - inv_laplacian and riesz_dd annihilate the k = 0 mode;
//  - leray_project passes the k = 0 mode through unchanged.

SpectralScalar derivative(const SpectralScalar& s, int axis);
SpectralVector gradient(const SpectralScalar& s);
SpectralScalar divergence(const SpectralVector& u);

// solution of -Laplace(u) = f with zero-mean convention
SpectralScalar inv_laplacian(const SpectralScalar& f);

// d_i d_j (-Laplace)^{-1}, symbol -xi_i xi_j / |xi|^2
SpectralScalar riesz_dd(const SpectralScalar& f, int i, int j);

// projection onto divergence-free fields, symbol I - xi xi^T/|xi|^2
void leray_project(SpectralVector& u);

// heat semigroup e^{t Laplace}, symbol e^{-4 pi^2 t |xi|^2}
void heat_multiply(SpectralScalar& s, double t);
void heat_multiply(SpectralVector& u, double t);

// unsteady Stokes kernel applied to a (not necessarily solenoidal) field:
// (I - xi xi^T/|xi|^2) e^{-4 pi^2 t |xi|^2}; k = 0 follows the projection
// convention (passed through the heat factor, which is 1 there).
void oseen_apply(SpectralVector& u, double t);

// zero all modes with any |wavenumber| above the 2/3-rule band edge
void dealias(SpectralScalar& s);
void dealias(SpectralVector& u);

// energy fraction carried by the top third of the retained band,
// |k|_inf in ((2/3) kcut, kcut]; the resolution alarm watches this.
double spectral_tail_fraction(const SpectralVector& u);

// pointwise product of two fields, computed sample-wise and re-truncated;
// inputs are dealiased first so the retained band of the result is exact.
SpectralScalar multiply_dealias(const SpectralScalar& a, const SpectralScalar& b);

// 4 pi^2 |xi|^2 per mode, cached per grid
const RArray& laplacian_symbol(const GridSpec& g);

}  // namespace nslab
