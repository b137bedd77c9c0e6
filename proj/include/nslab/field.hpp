#pragma once

#include <array>

#include "nslab/fft3.hpp"
#include "nslab/grid.hpp"

namespace nslab {

// Real samples on the grid, row-major, last axis fastest.
struct ScalarField {
    GridSpec grid;
    RArray v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), v(RArray::Zero(g.size())) {}
    double& at(int i, int j, int k) { return v[grid.flat(i, j, k)]; }
    double at(int i, int j, int k) const { return v[grid.flat(i, j, k)]; }
};

// Coefficients c_k of e^{2 pi i k.x/L} in DFT storage order; for real fields
// they are conjugate-symmetric, c_{-k} = conj(c_k).
struct SpectralScalar {
    GridSpec grid;
    CArray c;

    SpectralScalar() = default;
    explicit SpectralScalar(const GridSpec& g) : grid(g), c(CArray::Zero(g.size())) {}
    Cplx& at(int i, int j, int k) { return c[grid.flat(i, j, k)]; }
    Cplx at(int i, int j, int k) const { return c[grid.flat(i, j, k)]; }
};

struct VectorField {
    GridSpec grid;
    std::array<RArray, 3> v;

    VectorField() = default;
    explicit VectorField(const GridSpec& g)
        : grid(g), v{RArray::Zero(g.size()), RArray::Zero(g.size()), RArray::Zero(g.size())} {}
};

struct SpectralVector {
    GridSpec grid;
    std::array<CArray, 3> c;

    SpectralVector() = default;
    explicit SpectralVector(const GridSpec& g)
        : grid(g), c{CArray::Zero(g.size()), CArray::Zero(g.size()), CArray::Zero(g.size())} {}
};

// Transforms between sample and coefficient space. The grid is centered at
// -L/2, which shows up as a (-1)^{i+j+k} phase relative to the raw DFT (N is
// even, so wavenumber parity equals storage-index parity).
SpectralScalar to_spectral(const ScalarField& f);
ScalarField to_physical(const SpectralScalar& s);
SpectralVector to_spectral(const VectorField& f);
VectorField to_physical(const SpectralVector& s);

}  // namespace nslab
