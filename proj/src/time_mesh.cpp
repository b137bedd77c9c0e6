#include "nslab/time_mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace nslab {

TimeMesh TimeMesh::uniform(double T, int M) {
    if (!(T > 0.0) || M < 1) throw std::invalid_argument("TimeMesh: need T > 0, M >= 1");
    TimeMesh m;
    m.t.resize(M + 1);
    for (int i = 0; i <= M; ++i) m.t[i] = T * i / M;
    m.t[M] = T;
    return m;
}

std::vector<double> duhamel_weights(const TimeMesh& mesh, int j, double alpha) {
    if (j < 0 || j >= static_cast<int>(mesh.t.size()))
        throw std::invalid_argument("duhamel_weights: node out of range");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("duhamel_weights: need 0 <= alpha < 1");
    std::vector<double> w(j + 1, 0.0);
    const double tj = mesh.t[j];
    for (int i = 0; i < j; ++i) {
        const double a = tj - mesh.t[i + 1];
        const double b = tj - mesh.t[i];
        const double dt = b - a;
        const double m0 = (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) / (1.0 - alpha);
        const double m1 = (std::pow(b, 2.0 - alpha) - std::pow(a, 2.0 - alpha)) / (2.0 - alpha);
        w[i] += (m1 - a * m0) / dt;
        w[i + 1] += (b * m0 - m1) / dt;
    }
    return w;
}

double psi1(double z) {
    if (z < 1e-2)
        return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z * z * z * z / 120.0;
    return -std::expm1(-z) / z;
}

double psi2(double z) {
    if (z < 1e-2)
        return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0 + z * z * z * z / 720.0;
    return (z + std::expm1(-z)) / (z * z);
}

EnergyInts energy_ints(double lam, double dt) {
    const double z = lam * dt;
    EnergyInts e;
    e.e1 = dt * psi1(z);
    e.e2 = dt * psi1(2.0 * z);
    if (z < 1e-2) {
        // int s e^{-lam s} ds = dt^2 sum (n+1)/(n+2)! (-z)^n
        e.e1p = dt * dt *
                (0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 + z * z * z * z / 144.0);
    } else {
        // 1 - (1+z) e^-z, written against expm1 to tame the cancellation
        e.e1p = (-std::expm1(-z) - z * std::exp(-z)) / (lam * lam);
    }
    return e;
}

}  // namespace nslab
