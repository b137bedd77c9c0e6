#pragma once

#include <functional>
#include <vector>

#include "nslab/time_mesh.hpp"

namespace nslab {

// The comparison lemmas are conditional, so "the hypothesis did not hold" is
// a distinct outcome from "the conclusion failed".
enum class Verdict { Pass, Fail, NotApplicable };

const char* verdict_name(Verdict v);

// Weakly singular kernel c * tau^{-p}, 0 <= p < 1.
struct PowerKernel {
    double c = 0.0;
    double p = 0.5;
};

// phi(x) = D + C int_0^x phi(y) (x-y)^{-1/2} dy on [0, x_max].
struct VolterraProblem {
    double C = 0.0;
    double D = 0.0;
    double x_max = 1.0;
    int M = 1024;  // uniform product-integration cells
};

// Marching solution with weights exact on piecewise-linear phi; returns the
// M+1 node values.
std::vector<double> volterra_solve(const VolterraProblem& prob);

// Resolvent series D sum_{k<=k_max} (C sqrt(pi x))^k / Gamma(k/2+1). Throws
// if the ratio-test remainder bound at k_max exceeds 1e-8.
double volterra_series(double C, double D, double x, int k_max);

// log of the full series, evaluated by log-sum-exp so couplings far beyond
// double overflow (the mollified-majorant regime) remain usable.
double volterra_series_log(double C, double D, double x);

// Successive approximations phi_{n+1} = D + K phi_n starting from phi_0 = D;
// returns the iterates' final sweep (node values after `iters` applications).
std::vector<double> volterra_successive(const VolterraProblem& prob, int iters);

struct MarginProfile {
    Verdict verdict = Verdict::NotApplicable;
    double min_margin = 0.0;  // min over nodes of phi - f (conclusion slack)
    int argmin = -1;
    std::vector<double> margin;
    double hypothesis_slack = 0.0;  // most negative hypothesis residual seen
};

// Quadratic comparison: given samples on the mesh with
//   f <= a + int_0^t g(t-s) f(s)^2 ds   (sub-solution, checked)
//   phi >= b + int_0^t g(t-s) phi(s)^2 ds (super-solution, checked)
//   a <= b (checked), everything nonnegative,
// assert the conclusion f <= phi at every node.
struct InequalityProblem {
    TimeMesh mesh;
    PowerKernel g;
    std::vector<double> a, b, f, phi;
    double hyp_tol = 1e-8;
};

MarginProfile quadratic_compare(const InequalityProblem& prob);

// min over mesh nodes (t > 0) of  phi(t) - int_0^t g(t-s) phi(s)^2 ds - b(t),
// product integration on interior cells with the first cell integrated
// adaptively against the actual phi (which may blow up at 0 like t^{-1/4}).
double supersolution_verify(const std::function<double(double)>& phi, const PowerKernel& g,
                            const std::function<double(double)>& b, const TimeMesh& mesh);

// Linear comparison: march phi = b + int g(t-s) h(s) phi(s) ds and assert
// f <= phi, under the checked hypothesis f <= a + int g h f and a <= b.
MarginProfile linear_compare(const std::vector<double>& f, const PowerKernel& g,
                             const std::vector<double>& h, const std::vector<double>& a,
                             const std::vector<double>& b, const TimeMesh& mesh,
                             double hyp_tol = 1e-8);

// Min-kernel comparison: hypothesis f <= a + int min(g(t-s) f(s)^2, h(t-s)) ds
// with the steeper kernel h taking over away from s = t. If the closed gate
//   sup b + 3 (g.c C*^2)^{2/3} (h.c)^{1/3} <= C*
// holds (the exact value of int_0^inf min(g C*^2, h)), conclude f <= C* on
// (0, T). Requires g.p = 1/2, h.p = 2, the pair the gate is computed for.
MarginProfile min_kernel_compare(const std::vector<double>& f, const PowerKernel& g,
                                 const PowerKernel& h, const std::vector<double>& a,
                                 const std::vector<double>& b, double c_star,
                                 const TimeMesh& mesh, double hyp_tol = 1e-8);

// Named majorant shapes from the smoothing estimates.
std::function<double(double)> majorant_constant(double c);
std::function<double(double)> majorant_quarter(double c);       // c t^{-1/4}
std::function<double(double)> majorant_lp(double c, double p);  // c t^{-3/(2p)}

}  // namespace nslab
