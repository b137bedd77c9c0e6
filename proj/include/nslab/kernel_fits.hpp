#pragma once

#include <vector>

#include "nslab/kernels.hpp"

namespace nslab {

// Least-squares fit of log y = log_prefactor + exponent * log x, plus the
// worst residual in log space. This is the measurement protocol for every
// otherwise-unnamed kernel constant: fit the slope, keep the sup.
struct DecayFitResult {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    double max_residual = 0.0;
};

DecayFitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// L^p(R^3) norms of the kernel families at fixed time. All integrands are
// radial, so these reduce to 1-D quadrature: adaptive Gauss-Kronrod on
// geometric shells starting at the diffusive scale sqrt(t), stopped once the
// tail shells contribute nothing.
enum class KernelNorm { HeatL1, HeatL2, OseenL2, GradOseenL1 };
double kernel_time_norm(KernelNorm which, double t);

// sup_x |grad T(x,t)|_F, located on the radial profile (coarse scan plus
// golden-section refinement).
double grad_oseen_sup(double t);

// Scale-free constants sup_t norm(t) * t^expo over a geometric time ladder.
// Parabolic scaling makes the product exactly t-independent, so the ladder
// spread doubles as a quadrature sanity check.
double kernel_decay_constant(KernelNorm which, double expo);
double grad_oseen_sup_constant();  // sup_t t^2 ||grad T(t)||_inf

// Decay of the potential derivatives: fits log |grad^m P|(r, t) against
// log(r^2 + t); the slope should sit near -(m+1)/2. The companion constant
// is the sup of |grad^m P| (r^2+t)^{(m+1)/2} over the same radii.
DecayFitResult potential_decay_fit(int m, double t, const std::vector<double>& radii);
double potential_decay_constant(int m, double t, const std::vector<double>& radii);

// integral of |grad T(. - x, t) - grad T(. - y, t)|_F over a box wide enough
// to capture the difference tail, by midpoint quadrature with n^3 cells
double grad_oseen_holder_l1(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                            double t, int n = 72);

}  // namespace nslab
