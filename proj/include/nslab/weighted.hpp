#pragma once

#include "nslab/field.hpp"

namespace nslab {

struct SingularRatio {
    double integral = 0.0;  // int |f(x)|^2 / |x-y|^2 dx, periodic min-image
    double bound = 0.0;     // 4 ||grad f||_2^2
    double ratio = 0.0;     // integral / bound
};

// Hardy-type weighted integral centered at grid node (yi, yj, yk). Cells at
// min-image offsets within one cell of y use the exact cell average of
// |x-y|^{-2} (precomputed constants), which tames the integrable singularity;
// everything else is plain midpoint quadrature.
SingularRatio weighted_singular_ratio(const ScalarField& f, int yi, int yj, int yk);

// energy outside the centered ball of radius R: h^3 sum over |x| > R
double tail_energy(const VectorField& u, double R);

}  // namespace nslab
