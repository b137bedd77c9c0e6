#pragma once

#include <vector>

namespace nslab {

// Time nodes 0 = t[0] < ... < t[M] = T.
struct TimeMesh {
    std::vector<double> t;

    static TimeMesh uniform(double T, int M);

    int intervals() const { return static_cast<int>(t.size()) - 1; }
    double dt(int j) const { return t[j + 1] - t[j]; }
    double horizon() const { return t.back(); }
};

// Product-integration weights for the weakly singular integral
//   int_0^{t[j]} f(s) (t[j] - s)^{-alpha} ds,   0 <= alpha < 1,
// exact for piecewise-linear f: each cell contributes its moments
// M0 = int tau^-alpha, M1 = int tau^{1-alpha} in the backward variable
// tau = t[j] - s. alpha = 0 collapses to the trapezoid rule. Returns j+1
// weights, one per node up to and including t[j].
std::vector<double> duhamel_weights(const TimeMesh& mesh, int j, double alpha);

// Exponential integrator weights psi1(z) = (1 - e^-z)/z and
// psi2(z) = (z - 1 + e^-z)/z^2, with series fallbacks near z = 0.
double psi1(double z);
double psi2(double z);

// Exact step integrals for the scalar decay rate lam >= 0 over [0, dt]:
//   e1  = int e^{-lam s} ds,  e2 = int e^{-2 lam s} ds,
//   e1p = int s e^{-lam s} ds.
// These make per-mode energy ledgers exact for piecewise-linear forcing.
struct EnergyInts {
    double e1;
    double e2;
    double e1p;
};
EnergyInts energy_ints(double lam, double dt);

}  // namespace nslab
