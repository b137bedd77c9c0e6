#include "nslab/kernel_fits.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double radial_integrand(KernelNorm which, double r, double t) {
    const double shell = 4.0 * kPi * r * r;
    switch (which) {
        case KernelNorm::HeatL1: return shell * heat_phi(r, t);
        case KernelNorm::HeatL2: {
            const double p = heat_phi(r, t);
            return shell * p * p;
        }
        case KernelNorm::OseenL2: {
            const double f = oseen_frob(r, t);
            return shell * f * f;
        }
        case KernelNorm::GradOseenL1: return shell * grad_oseen_frob(r, t);
    }
    return 0.0;
}

// Integrate the radial profile over geometric shells [0,s], [s,2s], ... with
// s = sqrt(t), until two consecutive shells add a negligible fraction.
double radial_integral(KernelNorm which, double t) {
    using boost::math::quadrature::gauss_kronrod;
    const double s = std::sqrt(t);
    double acc = 0.0;
    double lo = 0.0, hi = s;
    int quiet = 0;
    for (int seg = 0; seg < 64 && quiet < 2; ++seg) {
        const double part = gauss_kronrod<double, 31>::integrate(
            [&](double r) { return radial_integrand(which, r, t); }, lo, hi, 10, 1e-12);
        acc += part;
        quiet = (std::abs(part) <= 1e-13 * std::abs(acc)) ? quiet + 1 : 0;
        lo = hi;
        hi *= 2.0;
    }
    return acc;
}

}  // namespace

DecayFitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_fit: need two or more matched samples");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    DecayFitResult fit;
    const double det = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / det;
    fit.log_prefactor = (sy - fit.exponent * sx) / n;
    for (int i = 0; i < n; ++i) {
        const double resid = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
        fit.max_residual = std::max(fit.max_residual, std::abs(resid));
    }
    return fit;
}

double kernel_time_norm(KernelNorm which, double t) {
    const double raw = radial_integral(which, t);
    const bool l2 = (which == KernelNorm::HeatL2 || which == KernelNorm::OseenL2);
    return l2 ? std::sqrt(raw) : raw;
}

double grad_oseen_sup(double t) {
    const double s = std::sqrt(t);
    // coarse scan for the bracket, then golden-section refinement
    const int scan = 96;
    double best_r = s, best_v = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double r = 12.0 * s * i / scan;
        const double v = grad_oseen_frob(r, t);
        if (v > best_v) { best_v = v; best_r = r; }
    }
    double a = std::max(1e-8 * s, best_r - 12.0 * s / scan);
    double b = best_r + 12.0 * s / scan;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = grad_oseen_frob(c, t), fd = grad_oseen_frob(d, t);
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = grad_oseen_frob(c, t);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = grad_oseen_frob(d, t);
        }
    }
    return std::max(fc, fd);
}

double kernel_decay_constant(KernelNorm which, double expo) {
    double sup = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double t = 1e-2 * std::pow(100.0, k / 8.0);
        sup = std::max(sup, kernel_time_norm(which, t) * std::pow(t, expo));
    }
    return sup;
}

double grad_oseen_sup_constant() {
    double sup = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double t = 1e-2 * std::pow(100.0, k / 8.0);
        sup = std::max(sup, grad_oseen_sup(t) * t * t);
    }
    return sup;
}

DecayFitResult potential_decay_fit(int m, double t, const std::vector<double>& radii) {
    std::vector<double> x, y;
    x.reserve(radii.size());
    y.reserve(radii.size());
    for (double r : radii) {
        x.push_back(r * r + t);
        y.push_back(potential_grad_frob(r, t, m));
    }
    return loglog_fit(x, y);
}

double potential_decay_constant(int m, double t, const std::vector<double>& radii) {
    double sup = 0.0;
    for (double r : radii) {
        const double scale = std::pow(r * r + t, 0.5 * (m + 1));
        sup = std::max(sup, potential_grad_frob(r, t, m) * scale);
    }
    return sup;
}

namespace {

double grad_frob_at(const Eigen::Vector3d& v, double t) {
    const OseenGrad g = oseen_tensor_grad(v, t);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) acc += g.d[i][j][l] * g.d[i][j][l];
    return std::sqrt(acc);
}

}  // namespace

double grad_oseen_holder_l1(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                            double t, int n) {
    const Eigen::Vector3d mid = 0.5 * (x + y);
    const double R = 6.0 * std::sqrt(t) + 3.0 * (x - y).norm();
    const double h = 2.0 * R / n;
    const double cell = h * h * h;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double px = mid[0] - R + (i + 0.5) * h;
        for (int j = 0; j < n; ++j) {
            const double py = mid[1] - R + (j + 0.5) * h;
            for (int k = 0; k < n; ++k) {
                const double pz = mid[2] - R + (k + 0.5) * h;
                const Eigen::Vector3d p(px, py, pz);
                const OseenGrad gx = oseen_tensor_grad(p - x, t);
                const OseenGrad gy = oseen_tensor_grad(p - y, t);
                double fr = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        for (int c = 0; c < 3; ++c) {
                            const double d = gx.d[a][b][c] - gy.d[a][b][c];
                            fr += d * d;
                        }
                acc += cell * std::sqrt(fr);
            }
        }
    }
    return acc;
}

}  // namespace nslab
