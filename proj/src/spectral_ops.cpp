#include "nslab/spectral_ops.hpp"

#include <cmath>
#include <map>
#include <memory>

namespace nslab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

template <typename F>
void for_each_mode(const GridSpec& g, F&& f) {
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double xi0 = g.xi(i);
        for (int j = 0; j < g.N; ++j) {
            double xi1 = g.xi(j);
            for (int k = 0; k < g.N; ++k, ++idx) f(idx, xi0, xi1, g.xi(k));
        }
    }
}

}  // namespace

const RArray& laplacian_symbol(const GridSpec& g) {
    static std::map<std::pair<double, int>, std::unique_ptr<RArray>> cache;
    auto key = std::make_pair(g.L, g.N);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto arr = std::make_unique<RArray>(g.size());
        for_each_mode(g, [&](std::int64_t idx, double x0, double x1, double x2) {
            (*arr)[idx] = 4.0 * M_PI * M_PI * (x0 * x0 + x1 * x1 + x2 * x2);
        });
        it = cache.emplace(key, std::move(arr)).first;
    }
    return *it->second;
}

SpectralScalar derivative(const SpectralScalar& s, int axis) {
    SpectralScalar r(s.grid);
    const int nyq = s.grid.N / 2;
    std::int64_t idx = 0;
    for (int i = 0; i < s.grid.N; ++i)
        for (int j = 0; j < s.grid.N; ++j)
            for (int k = 0; k < s.grid.N; ++k, ++idx) {
                int m = axis == 0 ? i : axis == 1 ? j : k;
                if (m == nyq) continue;
                double xi = s.grid.xi(m);
                r.c[idx] = Cplx(0.0, kTwoPi * xi) * s.c[idx];
            }
    return r;
}

SpectralVector gradient(const SpectralScalar& s) {
    SpectralVector g(s.grid);
    for (int d = 0; d < 3; ++d) g.c[d] = derivative(s, d).c;
    return g;
}

SpectralScalar divergence(const SpectralVector& u) {
    SpectralScalar d(u.grid);
    for (int a = 0; a < 3; ++a) {
        SpectralScalar comp;
        comp.grid = u.grid;
        comp.c = u.c[a];
        d.c += derivative(comp, a).c;
    }
    return d;
}

SpectralScalar inv_laplacian(const SpectralScalar& f) {
    SpectralScalar r(f.grid);
    const RArray& lam = laplacian_symbol(f.grid);
    r.c = f.c;
    r.c[0] = 0.0;
    for (std::int64_t i = 1; i < r.c.size(); ++i) r.c[i] /= lam[i];
    return r;
}

SpectralScalar riesz_dd(const SpectralScalar& f, int di, int dj) {
    SpectralScalar r(f.grid);
    for_each_mode(f.grid, [&](std::int64_t idx, double x0, double x1, double x2) {
        double xi[3] = {x0, x1, x2};
        double n2 = x0 * x0 + x1 * x1 + x2 * x2;
        r.c[idx] = n2 == 0.0 ? Cplx(0.0) : -xi[di] * xi[dj] / n2 * f.c[idx];
    });
    return r;
}

void leray_project(SpectralVector& u) {
    for_each_mode(u.grid, [&](std::int64_t idx, double x0, double x1, double x2) {
        double n2 = x0 * x0 + x1 * x1 + x2 * x2;
        if (n2 == 0.0) return;
        Cplx dot = (x0 * u.c[0][idx] + x1 * u.c[1][idx] + x2 * u.c[2][idx]) / n2;
        u.c[0][idx] -= x0 * dot;
        u.c[1][idx] -= x1 * dot;
        u.c[2][idx] -= x2 * dot;
    });
}

void heat_multiply(SpectralScalar& s, double t) {
    const RArray& lam = laplacian_symbol(s.grid);
    s.c *= (-t * lam).exp().cast<Cplx>();
}

void heat_multiply(SpectralVector& u, double t) {
    const RArray& lam = laplacian_symbol(u.grid);
    CArray damp = (-t * lam).exp().cast<Cplx>();
    for (int d = 0; d < 3; ++d) u.c[d] *= damp;
}

void oseen_apply(SpectralVector& u, double t) {
    leray_project(u);
    heat_multiply(u, t);
}

namespace {

void dealias_one(CArray& c, const GridSpec& g) {
    const int kc = g.kcut();
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        bool cut_i = std::abs(g.wavenumber(i)) > kc;
        for (int j = 0; j < g.N; ++j) {
            bool cut_ij = cut_i || std::abs(g.wavenumber(j)) > kc;
            for (int k = 0; k < g.N; ++k, ++idx)
                if (cut_ij || std::abs(g.wavenumber(k)) > kc) c[idx] = 0.0;
        }
    }
}

}  // namespace

void dealias(SpectralScalar& s) { dealias_one(s.c, s.grid); }

void dealias(SpectralVector& u) {
    for (int d = 0; d < 3; ++d) dealias_one(u.c[d], u.grid);
}

double spectral_tail_fraction(const SpectralVector& u) {
    const int kc = u.grid.kcut();
    const int lo = (2 * kc) / 3;
    double total = 0.0, tail = 0.0;
    std::int64_t idx = 0;
    for (int i = 0; i < u.grid.N; ++i) {
        int ai = std::abs(u.grid.wavenumber(i));
        for (int j = 0; j < u.grid.N; ++j) {
            int aj = std::max(ai, std::abs(u.grid.wavenumber(j)));
            for (int k = 0; k < u.grid.N; ++k, ++idx) {
                int am = std::max(aj, std::abs(u.grid.wavenumber(k)));
                double e = std::norm(u.c[0][idx]) + std::norm(u.c[1][idx]) +
                           std::norm(u.c[2][idx]);
                total += e;
                if (am > lo && am <= kc) tail += e;
            }
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

SpectralScalar multiply_dealias(const SpectralScalar& a, const SpectralScalar& b) {
    SpectralScalar at = a, bt = b;
    dealias(at);
    dealias(bt);
    ScalarField fa = to_physical(at), fb = to_physical(bt);
    fa.v *= fb.v;
    SpectralScalar r = to_spectral(fa);
    dealias(r);
    return r;
}

}  // namespace nslab
