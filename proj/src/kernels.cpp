#include "nslab/kernels.hpp"

#include <cmath>
#include <utility>

namespace nslab {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869;  // 1/sqrt(pi)
constexpr int kSeriesTerms = 10;
constexpr double kSeriesZ = 0.25;  // switch to series below this z = r/(2 sqrt t)

// Series coefficients in w = z^2 for the cancellation-prone radial factors.
// They share one family: coef(j, m) = (-1)^{m+1} 2^j / (m! (2m + 3 + 2j)) with
// j = 0 for G/pref, 1 for -A/(a^2 pref), 2 for B/(a^4 pref), 3 for -C2/(a^6 pref).
struct SeriesTable {
    double c[4][kSeriesTerms];
    SeriesTable() {
        for (int j = 0; j < 4; ++j) {
            double fact = 1.0;
            for (int m = 0; m < kSeriesTerms; ++m) {
                if (m > 0) fact *= m;
                double sgn = (m % 2 == 0) ? -1.0 : 1.0;
                c[j][m] = sgn * double(1 << j) / (fact * (2 * m + 3 + 2 * j));
            }
        }
    }
    double eval(int j, double w) const {
        double acc = 0.0, wm = 1.0;
        for (int m = 0; m < kSeriesTerms; ++m, wm *= w) acc += c[j][m] * wm;
        return acc;
    }
};

const SeriesTable& series() {
    static const SeriesTable t;
    return t;
}

}  // namespace

double heat_phi(double r, double t) {
    double a = std::pow(4.0 * M_PI * t, -1.5);
    return a * std::exp(-r * r / (4.0 * t));
}

double heat_phi(const Eigen::Vector3d& x, double t) { return heat_phi(x.norm(), t); }

double heat_phi_fourier_r(double rho, double t) {
    return std::exp(-4.0 * M_PI * M_PI * t * rho * rho);
}

double heat_phi_fourier(const Eigen::Vector3d& xi, double t) {
    return heat_phi_fourier_r(xi.norm(), t);
}

double oseen_potential(double r, double t) {
    double a = 0.5 / std::sqrt(t);
    double z = a * r;
    if (z < 5e-4) {
        // erf(z)/z = (2/sqrt(pi)) sum (-1)^n z^{2n} / (n! (2n+1)), six terms
        double w = z * z, term = 1.0, acc = 0.0, fact = 1.0;
        for (int n = 0; n < 6; ++n) {
            if (n > 0) {
                fact *= n;
                term *= -w;
            }
            acc += term / (fact * (2 * n + 1));
        }
        return a / (4.0 * M_PI) * 2.0 * kInvSqrtPi * acc;
    }
    return std::erf(z) / (4.0 * M_PI * r);
}

double oseen_potential(const Eigen::Vector3d& x, double t) {
    return oseen_potential(x.norm(), t);
}

OseenRadial oseen_radial(double r, double t) {
    OseenRadial o;
    const double a = 0.5 / std::sqrt(t);
    const double a2 = a * a;
    const double z = a * r;
    const double w = z * z;
    const double pref = a * a2 / (M_PI * std::sqrt(M_PI));

    o.phi = pref * std::exp(-w);
    o.P = oseen_potential(r, t);

    if (z < kSeriesZ) {
        const SeriesTable& s = series();
        o.G = pref * s.eval(0, w);
        o.A = -a2 * pref * s.eval(1, w);
        o.B = a2 * a2 * pref * s.eval(2, w);
        o.C2 = -a2 * a2 * a2 * pref * s.eval(3, w);
    } else {
        double r2 = r * r;
        double num = 2.0 * z * kInvSqrtPi * std::exp(-w) - std::erf(z);
        o.G = a * a2 * num / (4.0 * M_PI * w * z);
        o.A = -(o.phi + 3.0 * o.G) / r2;
        o.B = (2.0 * a2 * o.phi - 5.0 * o.A) / r2;
        o.C2 = -(4.0 * a2 * a2 * o.phi + 7.0 * o.B) / r2;
    }
    return o;
}

Eigen::Matrix3d oseen_tensor(const Eigen::Vector3d& x, double t) {
    OseenRadial o = oseen_radial(x.norm(), t);
    Eigen::Matrix3d m = (o.phi + o.G) * Eigen::Matrix3d::Identity();
    m += o.A * x * x.transpose();
    return m;
}

OseenGrad oseen_tensor_grad(const Eigen::Vector3d& x, double t) {
    OseenRadial o = oseen_radial(x.norm(), t);
    double phit = -o.phi / (2.0 * t);  // (d_r Phi)/r
    OseenGrad g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) {
                double v = 0.0;
                if (i == j) v += x[l] * (phit + o.A);
                if (i == l) v += x[j] * o.A;
                if (j == l) v += x[i] * o.A;
                v += x[i] * x[j] * x[l] * o.B;
                g.d[i][j][l] = v;
            }
    return g;
}

OseenGrad2 oseen_tensor_grad2(const Eigen::Vector3d& x, double t) {
    OseenRadial o = oseen_radial(x.norm(), t);
    double phit = -o.phi / (2.0 * t);
    double phitt = o.phi / (4.0 * t * t);  // (d_r (phit r))' / r, i.e. next radial level
    OseenGrad2 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                for (int m = 0; m < 3; ++m) {
                    double v = 0.0;
                    // delta_ij (d_m d_l Phi)
                    if (i == j) {
                        if (l == m) v += phit;
                        v += x[l] * x[m] * phitt;
                    }
                    // fourth derivative of P
                    if (i == j && l == m) v += o.A;
                    if (i == l && j == m) v += o.A;
                    if (j == l && i == m) v += o.A;
                    double xb = o.B;
                    if (i == j) v += x[l] * x[m] * xb;
                    if (i == l) v += x[j] * x[m] * xb;
                    if (j == l) v += x[i] * x[m] * xb;
                    if (i == m) v += x[j] * x[l] * xb;
                    if (j == m) v += x[i] * x[l] * xb;
                    if (l == m) v += x[i] * x[j] * xb;
                    v += x[i] * x[j] * x[l] * x[m] * o.C2;
                    g.d[i][j][l][m] = v;
                }
    return g;
}

Eigen::Matrix3d oseen_multiplier(const Eigen::Vector3d& xi, double t) {
    double n2 = xi.squaredNorm();
    double damp = std::exp(-4.0 * M_PI * M_PI * t * n2);
    if (n2 == 0.0) return Eigen::Matrix3d::Identity();
    return damp * (Eigen::Matrix3d::Identity() - xi * xi.transpose() / n2);
}

double oseen_frob(double r, double t) {
    OseenRadial o = oseen_radial(r, t);
    double d = o.phi + o.G;
    double r2 = r * r;
    double f2 = 3.0 * d * d + 2.0 * d * o.A * r2 + o.A * o.A * r2 * r2;
    return std::sqrt(std::max(f2, 0.0));
}

double grad_oseen_frob(double r, double t) {
    OseenGrad g = oseen_tensor_grad(Eigen::Vector3d(r, 0, 0), t);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) acc += g.d[i][j][l] * g.d[i][j][l];
    return std::sqrt(acc);
}

double grad2_oseen_frob(double r, double t) {
    OseenGrad2 g = oseen_tensor_grad2(Eigen::Vector3d(r, 0, 0), t);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                for (int m = 0; m < 3; ++m) acc += g.d[i][j][l][m] * g.d[i][j][l][m];
    return std::sqrt(acc);
}

double potential_grad_frob(double r, double t, int m) {
    OseenRadial o = oseen_radial(r, t);
    if (m == 0) return std::abs(o.P);
    if (m == 1) return std::abs(o.G) * r;  // |grad P| = |P'| = |G| r
    // |grad^2 P|_F for the radial P: diag(G + A r^2, G, G) in the frame of x
    double d = o.G + o.A * r * r;
    return std::sqrt(d * d + 2.0 * o.G * o.G);
}

std::array<SpectralScalar, 6> periodized_oseen_spectral_all(const GridSpec& g, double t,
                                                            double sigma, int shells) {
    // short-range sample: delta_ij Phi(t) + d_i d_j [P(t) - P(sigma)], all six
    // upper-triangle components from one sweep of the (expensive) radial kernels
    std::array<ScalarField, 6> sample = {ScalarField(g), ScalarField(g), ScalarField(g),
                                         ScalarField(g), ScalarField(g), ScalarField(g)};
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double x0 = g.coord(i);
        for (int j = 0; j < g.N; ++j) {
            double x1 = g.coord(j);
            for (int k = 0; k < g.N; ++k, ++idx) {
                double x2 = g.coord(k);
                double acc[6] = {0, 0, 0, 0, 0, 0};
                for (int si = -shells; si <= shells; ++si)
                    for (int sj = -shells; sj <= shells; ++sj)
                        for (int sk = -shells; sk <= shells; ++sk) {
                            Eigen::Vector3d x(x0 + si * g.L, x1 + sj * g.L, x2 + sk * g.L);
                            double r = x.norm();
                            OseenRadial ot = oseen_radial(r, t);
                            OseenRadial os = oseen_radial(r, sigma);
                            const double diag = ot.phi + (ot.G - os.G);
                            const double dA = ot.A - os.A;
                            int c = 0;
                            for (int ci = 0; ci < 3; ++ci)
                                for (int cj = ci; cj < 3; ++cj, ++c) {
                                    double v = x[ci] * x[cj] * dA;
                                    if (ci == cj) v += diag;
                                    acc[c] += v;
                                }
                        }
                for (int c = 0; c < 6; ++c) sample[c].v[idx] = acc[c];
            }
        }
    }
    std::array<SpectralScalar, 6> out = {to_spectral(sample[0]), to_spectral(sample[1]),
                                         to_spectral(sample[2]), to_spectral(sample[3]),
                                         to_spectral(sample[4]), to_spectral(sample[5])};

    // exact dipole coefficients: -xihat_i xihat_j e^{-4 pi^2 sigma |xi|^2} / L^3
    const double L3 = g.L * g.L * g.L;
    idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double xi0 = g.xi(i);
        for (int j = 0; j < g.N; ++j) {
            double xi1 = g.xi(j);
            for (int k = 0; k < g.N; ++k, ++idx) {
                double xi2 = g.xi(k);
                double xi[3] = {xi0, xi1, xi2};
                double n2 = xi0 * xi0 + xi1 * xi1 + xi2 * xi2;
                if (n2 == 0.0) continue;
                double damp = std::exp(-4.0 * M_PI * M_PI * sigma * n2);
                int c = 0;
                for (int ci = 0; ci < 3; ++ci)
                    for (int cj = ci; cj < 3; ++cj, ++c)
                        out[c].c[idx] += -xi[ci] * xi[cj] / n2 * damp / L3;
            }
        }
    }
    return out;
}

SpectralScalar periodized_oseen_spectral(const GridSpec& g, int ci, int cj, double t,
                                         double sigma, int shells) {
    if (ci > cj) std::swap(ci, cj);
    const int c = ci * (5 - ci) / 2 + cj;
    return periodized_oseen_spectral_all(g, t, sigma, shells)[c];
}

}  // namespace nslab
