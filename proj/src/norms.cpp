#include "nslab/norms.hpp"

#include <cmath>

#include "nslab/rng.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

namespace {

double lp_of_magnitude(const RArray& mag, const GridSpec& g, double p) {
    if (p == kInfinity) return mag.maxCoeff();
    double cell = g.h() * g.h() * g.h();
    if (p == 2.0) return std::sqrt(cell * mag.square().sum());
    if (p == 1.0) return cell * mag.sum();
    return std::pow(cell * mag.pow(p).sum(), 1.0 / p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
    RArray mag = f.v.abs();
    return lp_of_magnitude(mag, f.grid, p);
}

double lp_norm(const VectorField& f, double p) {
    RArray mag = (f.v[0].square() + f.v[1].square() + f.v[2].square()).sqrt();
    return lp_of_magnitude(mag, f.grid, p);
}

double l2_norm(const SpectralScalar& s) {
    double L3 = s.grid.L * s.grid.L * s.grid.L;
    return std::sqrt(L3 * s.c.abs2().sum());
}

double l2_norm(const SpectralVector& u) {
    double L3 = u.grid.L * u.grid.L * u.grid.L;
    double e = u.c[0].abs2().sum() + u.c[1].abs2().sum() + u.c[2].abs2().sum();
    return std::sqrt(L3 * e);
}

double h1_seminorm(const SpectralScalar& s) {
    const RArray& lam = laplacian_symbol(s.grid);
    double L3 = s.grid.L * s.grid.L * s.grid.L;
    return std::sqrt(L3 * (lam * s.c.abs2()).sum());
}

double h1_seminorm(const SpectralVector& u) {
    const RArray& lam = laplacian_symbol(u.grid);
    double L3 = u.grid.L * u.grid.L * u.grid.L;
    double e = (lam * u.c[0].abs2()).sum() + (lam * u.c[1].abs2()).sum() +
               (lam * u.c[2].abs2()).sum();
    return std::sqrt(L3 * e);
}

double holder_half_seminorm(const ScalarField& f, std::uint64_t seed, int npairs) {
    CounterRng rng{seed};
    const int N = f.grid.N;
    const double L = f.grid.L;
    double best = 0.0;
    for (int n = 0; n < npairs; ++n) {
        std::uint64_t b = rng.bits(n);
        // two grid points from one 64-bit draw (N <= 2^10 per axis)
        int i1 = int(b % N), j1 = int((b >> 10) % N), k1 = int((b >> 20) % N);
        int i2 = int((b >> 30) % N), j2 = int((b >> 40) % N), k2 = int((b >> 50) % N);
        if (i1 == i2 && j1 == j2 && k1 == k2) continue;
        auto mi = [&](int a, int b2) {
            double d = std::abs(f.grid.coord(a) - f.grid.coord(b2));
            return std::min(d, L - d);
        };
        double dx = mi(i1, i2), dy = mi(j1, j2), dz = mi(k1, k2);
        double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        double df = std::abs(f.v[f.grid.flat(i1, j1, k1)] - f.v[f.grid.flat(i2, j2, k2)]);
        best = std::max(best, df / std::sqrt(dist));
    }
    return best;
}

double divergence_max(const SpectralVector& u) {
    ScalarField d = to_physical(divergence(u));
    return d.v.abs().maxCoeff();
}

NormReport norm_report(const SpectralVector& u) {
    NormReport r;
    r.l2 = l2_norm(u);
    r.h1semi = h1_seminorm(u);
    VectorField f = to_physical(u);
    r.linf = lp_norm(f, kInfinity);
    r.l4 = lp_norm(f, 4.0);
    r.l6 = lp_norm(f, 6.0);
    return r;
}

}  // namespace nslab
