#include "nslab/random_fields.hpp"

#include <cmath>

#include "nslab/norms.hpp"
#include "nslab/rng.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

namespace {

void shape_spectrum(SpectralScalar& s, double k0, SpectralProfile profile) {
    const GridSpec& g = s.grid;
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double ki = g.wavenumber(i);
        for (int j = 0; j < g.N; ++j) {
            double kj = g.wavenumber(j);
            for (int k = 0; k < g.N; ++k, ++idx) {
                double kk = g.wavenumber(k);
                double k2 = ki * ki + kj * kj + kk * kk;
                if (profile == SpectralProfile::Smooth)
                    s.c[idx] *= std::exp(-k2 / (k0 * k0));
                // Rough: leave the band flat
            }
        }
    }
    dealias(s);
    s.c[0] = 0.0;  // zero mean
}

}  // namespace

ScalarField random_scalar(const GridSpec& g, std::uint64_t seed, double k0,
                          SpectralProfile profile) {
    CounterRng rng{seed};
    ScalarField noise(g);
    for (std::int64_t n = 0; n < g.size(); ++n) noise.v[n] = rng.gaussian(n);
    SpectralScalar s = to_spectral(noise);
    shape_spectrum(s, k0, profile);
    return to_physical(s);
}

VectorField random_solenoidal(const GridSpec& g, std::uint64_t seed, double k0,
                              double scale, double p, SpectralProfile profile) {
    CounterRng base{seed};
    SpectralVector u(g);
    for (int d = 0; d < 3; ++d) {
        CounterRng rng = base.stream(d);
        ScalarField noise(g);
        for (std::int64_t n = 0; n < g.size(); ++n) noise.v[n] = rng.gaussian(n);
        SpectralScalar s = to_spectral(noise);
        shape_spectrum(s, k0, profile);
        u.c[d] = s.c;
    }
    leray_project(u);
    VectorField f = to_physical(u);
    double cur = lp_norm(f, p);
    if (cur > 0.0) {
        double a = scale / cur;
        for (int d = 0; d < 3; ++d) f.v[d] *= a;
    }
    return f;
}

VectorField taylor_green(const GridSpec& g, double amplitude) {
    VectorField f(g);
    const double w = 2.0 * M_PI / g.L;
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double x = g.coord(i);
        for (int j = 0; j < g.N; ++j) {
            double y = g.coord(j);
            for (int k = 0; k < g.N; ++k, ++idx) {
                double z = g.coord(k);
                f.v[0][idx] = amplitude * std::sin(w * x) * std::cos(w * y) * std::cos(w * z);
                f.v[1][idx] = -amplitude * std::cos(w * x) * std::sin(w * y) * std::cos(w * z);
                f.v[2][idx] = 0.0;
            }
        }
    }
    return f;
}

namespace {

// bump profile and its derivative w.r.t. s = |x-c|^2/R^2
inline double bump_of_s(double s) { return s < 1.0 ? std::exp(1.0 / (s - 1.0)) : 0.0; }
inline double bump_ds(double s) {
    if (s >= 1.0) return 0.0;
    double d = s - 1.0;
    return -std::exp(1.0 / d) / (d * d);
}

}  // namespace

ScalarField bump_scalar(const GridSpec& g, const Eigen::Vector3d& center, double R,
                        double amplitude) {
    ScalarField f(g);
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double dx = g.coord(i) - center[0];
        for (int j = 0; j < g.N; ++j) {
            double dy = g.coord(j) - center[1];
            for (int k = 0; k < g.N; ++k, ++idx) {
                double dz = g.coord(k) - center[2];
                double s = (dx * dx + dy * dy + dz * dz) / (R * R);
                f.v[idx] = amplitude * bump_of_s(s);
            }
        }
    }
    return f;
}

VectorField bump_solenoidal(const GridSpec& g, const Eigen::Vector3d& center, double R,
                            double amplitude) {
    VectorField f(g);
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double dx = g.coord(i) - center[0];
        for (int j = 0; j < g.N; ++j) {
            double dy = g.coord(j) - center[1];
            for (int k = 0; k < g.N; ++k, ++idx) {
                double dz = g.coord(k) - center[2];
                double s = (dx * dx + dy * dy + dz * dz) / (R * R);
                double dpsi = amplitude * bump_ds(s) * 2.0 / (R * R);
                f.v[0][idx] = dpsi * dy;   // d(psi)/dy
                f.v[1][idx] = -dpsi * dx;  // -d(psi)/dx
                f.v[2][idx] = 0.0;
            }
        }
    }
    SpectralVector u = to_spectral(f);
    leray_project(u);
    dealias(u);
    return to_physical(u);
}

}  // namespace nslab
