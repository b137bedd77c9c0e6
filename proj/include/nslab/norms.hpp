#pragma once

#include <limits>

#include "nslab/field.hpp"

namespace nslab {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Lp norms of grid samples: midpoint quadrature (h^3 sum)^{1/p}; p = infinity
// is the grid maximum. Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& f, double p);

// Plancherel versions, exact on the trigonometric interpolant.
double l2_norm(const SpectralScalar& s);
double l2_norm(const SpectralVector& u);
double h1_seminorm(const SpectralScalar& s);
double h1_seminorm(const SpectralVector& u);

// sup over sampled pairs of |f(x)-f(y)| / |x-y|^{1/2}, periodic min-image
// distance; pairs are drawn from the named seed so reports are reproducible.
double holder_half_seminorm(const ScalarField& f, std::uint64_t seed, int npairs = 4096);

double divergence_max(const SpectralVector& u);

struct NormReport {
    double l2 = 0.0;
    double h1semi = 0.0;
    double linf = 0.0;
    double l4 = 0.0;
    double l6 = 0.0;
};

NormReport norm_report(const SpectralVector& u);

}  // namespace nslab
