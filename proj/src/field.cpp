#include "nslab/field.hpp"

namespace nslab {

namespace {

// (-1)^{i+j+k} in place, shared by both transform directions
void apply_centering_phase(CArray& a, int N) {
    std::int64_t idx = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            int p = (i + j) & 1;
            for (int k = 0; k < N; ++k, ++idx)
                if ((p + k) & 1) a[idx] = -a[idx];
        }
}

}  // namespace

SpectralScalar to_spectral(const ScalarField& f) {
    SpectralScalar s(f.grid);
    s.c = f.v.cast<Cplx>();
    dft3(s.c, f.grid.N, true);
    apply_centering_phase(s.c, f.grid.N);
    s.c /= static_cast<double>(f.grid.size());
    return s;
}

ScalarField to_physical(const SpectralScalar& s) {
    ScalarField f(s.grid);
    CArray tmp = s.c * static_cast<double>(s.grid.size());
    apply_centering_phase(tmp, s.grid.N);
    dft3(tmp, s.grid.N, false);
    f.v = tmp.real();
    return f;
}

SpectralVector to_spectral(const VectorField& f) {
    SpectralVector s(f.grid);
    for (int d = 0; d < 3; ++d) {
        ScalarField comp;
        comp.grid = f.grid;
        comp.v = f.v[d];
        s.c[d] = to_spectral(comp).c;
    }
    return s;
}

VectorField to_physical(const SpectralVector& s) {
    VectorField f(s.grid);
    for (int d = 0; d < 3; ++d) {
        SpectralScalar comp;
        comp.grid = s.grid;
        comp.c = s.c[d];
        f.v[d] = to_physical(comp).v;
    }
    return f;
}

}  // namespace nslab
