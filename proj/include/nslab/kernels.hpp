#pragma once

#include <Eigen/Dense>

#include <array>

#include "nslab/field.hpp"

namespace nslab {

// Heat kernel Phi(x,t) = (4 pi t)^{-3/2} e^{-|x|^2/4t} and its transform
// e^{-4 pi^2 t |xi|^2} (convention: hat f(xi) = int f e^{-2 pi i x.xi}).
double heat_phi(double r, double t);
double heat_phi(const Eigen::Vector3d& x, double t);
double heat_phi_fourier_r(double rho, double t);
double heat_phi_fourier(const Eigen::Vector3d& xi, double t);

// Potential solving -Laplace(P) = Phi: P(x,t) = erf(|x|/(2 sqrt t))/(4 pi |x|),
// with the removable singularity at x = 0 handled by a short Taylor series.
double oseen_potential(double r, double t);
double oseen_potential(const Eigen::Vector3d& x, double t);

// Radial building blocks for the tensor and its first two gradients. With
// z = r/(2 sqrt t) and prefix a = 1/(2 sqrt t):
//   d_i d_j P       = delta_ij G + x_i x_j A
//   d_l d_i d_j P   = (delta x)_sym A + x_i x_j x_l B
//   d_m d_l d_i d_j P adds C2 = B'/r
// Each closed form cancels near r = 0 and switches to its power series there.
struct OseenRadial {
    double phi;  // heat kernel
    double P;    // potential
    double G;    // P'/r
    double A;    // -(phi + 3G)/r^2
    double B;    // (2 a^2 phi - 5A)/r^2
    double C2;   // -(4 a^4 phi + 7B)/r^2
};
OseenRadial oseen_radial(double r, double t);

// T_ij = delta_ij Phi + d_i d_j P; symmetric, tr T = 2 Phi, even in x.
Eigen::Matrix3d oseen_tensor(const Eigen::Vector3d& x, double t);

// grad(i,j,l) = d_l T_ij; odd in x.
struct OseenGrad {
    double d[3][3][3];
    double operator()(int i, int j, int l) const { return d[i][j][l]; }
};
OseenGrad oseen_tensor_grad(const Eigen::Vector3d& x, double t);

// grad2(i,j,l,m) = d_m d_l T_ij
struct OseenGrad2 {
    double d[3][3][3][3];
    double operator()(int i, int j, int l, int m) const { return d[i][j][l][m]; }
};
OseenGrad2 oseen_tensor_grad2(const Eigen::Vector3d& x, double t);

// Fourier side: (I - xi xi^T/|xi|^2) e^{-4 pi^2 t |xi|^2}; at xi = 0 the
// projection follows the zero-mode convention and passes through (identity).
Eigen::Matrix3d oseen_multiplier(const Eigen::Vector3d& xi, double t);

// Rotation-invariant Frobenius magnitudes, as functions of r = |x|.
double oseen_frob(double r, double t);
double grad_oseen_frob(double r, double t);
double grad2_oseen_frob(double r, double t);
// |grad^m P| for m = 0, 1, 2
double potential_grad_frob(double r, double t, int m);

// Coefficients of the periodized kernel component T_ij on the grid. The
// tensor's far field is the conditionally convergent dipole d_i d_j (4pi|x|)^{-1},
// so the kernel is split at an auxiliary scale sigma: the short-range part
// (difference of error-function potentials, exponentially localized) is
// sampled with `shells` image layers, and the dipole carries its exact
// per-mode coefficient -xihat_i xihat_j e^{-4 pi^2 sigma |xi|^2} / L^3.
SpectralScalar periodized_oseen_spectral(const GridSpec& g, int i, int j, double t,
                                         double sigma, int shells = 1);

// All six upper-triangle components (00, 01, 02, 11, 12, 22) from one sweep;
// the radial kernel evaluations dominate, so batching them is a 6x saving.
std::array<SpectralScalar, 6> periodized_oseen_spectral_all(const GridSpec& g, double t,
                                                            double sigma, int shells = 1);

}  // namespace nslab
