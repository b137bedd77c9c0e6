#include "nslab/mollifier.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <memory>

#include "nslab/fft3.hpp"

namespace nslab {

namespace {

using boost::math::quadrature::gauss_kronrod;

double raw_bump(double r) {
    double s = r * r - 1.0;
    return s < 0.0 ? std::exp(1.0 / s) : 0.0;
}

}  // namespace

double mollifier_constant() {
    static const double C = [] {
        double m = gauss_kronrod<double, 15>::integrate(
            [](double r) { return r * r * raw_bump(r); }, 0.0, 1.0, 12, 1e-14);
        return 1.0 / (4.0 * M_PI * m);
    }();
    return C;
}

double mollifier_eta(double r) { return mollifier_constant() * raw_bump(r); }

double mollifier_eta_l2() {
    static const double n = [] {
        double m = gauss_kronrod<double, 15>::integrate(
            [](double r) {
                double e = mollifier_eta(r);
                return r * r * e * e;
            },
            0.0, 1.0, 12, 1e-14);
        return std::sqrt(4.0 * M_PI * m);
    }();
    return n;
}

double mollifier_hat(double rho) {
    // radial transform of a unit-mass radial kernel: 4 pi int r^2 eta(r) sinc(2 pi r rho)
    if (rho == 0.0) return 1.0;
    double v = gauss_kronrod<double, 15>::integrate(
        [rho](double r) {
            double z = 2.0 * M_PI * r * rho;
            double sinc = std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
            return r * r * mollifier_eta(r) * sinc;
        },
        0.0, 1.0, 12, 1e-13);
    return 4.0 * M_PI * v;
}

namespace {

RArray build_multiplier(const GridSpec& g, double eps) {
    const int N = g.N;
    const double h = g.h();
    RArray mult(g.size());

    if (eps >= 3.0 * h) {
        // sampled kernel, indexed by periodic displacement from zero
        CArray kernel(g.size());
        double mass = 0.0;
        std::int64_t idx = 0;
        for (int i = 0; i < N; ++i) {
            double dx = (i < N / 2 ? i : i - N) * h;
            for (int j = 0; j < N; ++j) {
                double dy = (j < N / 2 ? j : j - N) * h;
                for (int k = 0; k < N; ++k, ++idx) {
                    double dz = (k < N / 2 ? k : k - N) * h;
                    double r = std::sqrt(dx * dx + dy * dy + dz * dz) / eps;
                    double val = mollifier_eta(r) / (eps * eps * eps);
                    kernel[idx] = val;
                    mass += val;
                }
            }
        }
        kernel /= mass * h * h * h;  // exact unit discrete mass
        dft3(kernel, N, true);
        mult = kernel.real() * (h * h * h);
    } else {
        // continuum multiplier eta_hat(eps |xi|) through a dense radial table
        const double rho_max = eps * std::sqrt(3.0) * (N / 2) / g.L + 1e-9;
        const int M = 2048;
        RArray table(M + 1);
        for (int m = 0; m <= M; ++m) table[m] = mollifier_hat(rho_max * m / M);
        std::int64_t idx = 0;
        for (int i = 0; i < N; ++i) {
            double x0 = g.xi(i);
            for (int j = 0; j < N; ++j) {
                double x1 = g.xi(j);
                for (int k = 0; k < N; ++k, ++idx) {
                    double x2 = g.xi(k);
                    double rho = eps * std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
                    double s = rho / rho_max * M;
                    int m0 = std::min(int(s), M - 1);
                    double w = s - m0;
                    mult[idx] = (1.0 - w) * table[m0] + w * table[m0 + 1];
                }
            }
        }
    }
    return mult;
}

const RArray& cached_multiplier(const GridSpec& g, double eps) {
    static std::map<std::tuple<double, int, double>, std::unique_ptr<RArray>> cache;
    auto key = std::make_tuple(g.L, g.N, eps);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<RArray>(build_multiplier(g, eps))).first;
    return *it->second;
}

}  // namespace

RArray mollifier_multiplier(const GridSpec& g, double eps) { return cached_multiplier(g, eps); }

void mollify(SpectralScalar& s, double eps) {
    const RArray& m = cached_multiplier(s.grid, eps);
    s.c *= m.cast<Cplx>();
}

void mollify(SpectralVector& u, double eps) {
    const RArray& m = cached_multiplier(u.grid, eps);
    CArray mc = m.cast<Cplx>();
    for (int d = 0; d < 3; ++d) u.c[d] *= mc;
}

}  // namespace nslab
