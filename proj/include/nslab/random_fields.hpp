#pragma once

#include <Eigen/Dense>

#include "nslab/field.hpp"

namespace nslab {

enum class SpectralProfile {
    Smooth,  // Gaussian low-pass around k0: well-resolved, rapidly decaying tail
    Rough    // flat across the dealiased band: L2 data with no extra regularity
};

// Seeded synthesis. All randomness flows through the counter generator, so a
// (seed, grid) pair fully determines every field below.
ScalarField random_scalar(const GridSpec& g, std::uint64_t seed, double k0,
                          SpectralProfile profile = SpectralProfile::Smooth);

// divergence-free, dealiased, rescaled so the requested norm equals `scale`
// (p = infinity or 2); component streams are independent.
VectorField random_solenoidal(const GridSpec& g, std::uint64_t seed, double k0,
                              double scale, double p = 2.0,
                              SpectralProfile profile = SpectralProfile::Smooth);

// classic single-triad vortex, solenoidal by construction
VectorField taylor_green(const GridSpec& g, double amplitude);

// smooth bump exp(1/(s-1)), s = |x-c|^2/R^2 < 1, zero outside
ScalarField bump_scalar(const GridSpec& g, const Eigen::Vector3d& center, double R,
                        double amplitude);

// curl of (0, 0, psi) with psi the bump above, sampled from the analytic
// derivatives so the samples are exactly compactly supported, then projected
// to kill the O(interpolation) divergence residual.
VectorField bump_solenoidal(const GridSpec& g, const Eigen::Vector3d& center, double R,
                            double amplitude);

}  // namespace nslab
