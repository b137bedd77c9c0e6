#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nslab/analysis.hpp"
#include "nslab/stokes.hpp"

namespace nslab {

// Constants the quantitative statements below run on. None are tuned by
// hand: c_a, c_b, c_oseen_l2 are kernel quadratures, c_grad_heat is the exact
// operator norm of the heat semigroup H^1 -> L^inf on this grid (a spectral
// sum, maximized over a time ladder), c_moll and c_heat_linf are closed
// forms, and c_prime is measured by driving the first Picard correction with
// heat flows of a seeded batch of random smooth solenoidal fields and taking
// the worst ratio
//   ||correction(t_j)||_inf / int_0^{t_j} ||u(s)||_inf^2 (t_j - s)^{-1/2} ds
// over nodes and seeds (product-integration weights in the denominator).
// That ratio is bounded by c_a, which caps how badly a finite batch can
// undershoot; measure_constants rejects a measurement above that ceiling.
struct MeasuredConstants {
    double c_prime = 0.0;     // Duhamel sup-norm iteration constant
    double c_dprime = 0.0;    // max(c_a, c_b): the min-kernel pair constant
    double c_a = 0.0;         // sup_t sqrt(t) ||grad T(t)||_L1
    double c_b = 0.0;         // sup_t t^2    ||grad T(t)||_inf
    double c_grad_heat = 0.0; // sup_t t^{1/4} ||e^{t Lap}||_{H1 -> Linf} on this grid
    double c_oseen_l2 = 0.0;  // sup_t t^{3/4} ||T(t)||_L2
    double c_moll = 0.0;      // ||eta||_2: ||J_eps v||_inf <= c eps^{-3/2} ||v||_2
    double c_heat_linf = 0.0; // (8 pi)^{-3/4}: ||e^{t Lap}||_{L2 -> Linf} t^{3/4}

    // provenance: the batch protocol that produced c_prime
    GridSpec grid;
    int mesh_m = 0;
    double mesh_t = 0.0;
    std::uint64_t seed = 0;
    int batch = 0;
};

// Measured once per (grid, mesh protocol) and cached in-process.
MeasuredConstants measure_constants(const GridSpec& g, int mesh_m = 16,
                                    double mesh_t = 0.25,
                                    std::uint64_t seed = 0x6c657261793334ull,
                                    int batch = 50);

// Per-node scalar history of a solve: everything the downstream checks
// consume without needing the fields themselves. dissipation_cum is
// 2 int_0^t ||grad u||^2 (the energy-equality convention), energy_defect is
// |l2^2 - l2(0)^2 + dissipation_cum| / l2(0)^2, and pressure_l2 is filled
// only when the solve was asked to trace the pressure.
struct FlowTrace {
    std::vector<double> t;
    std::vector<double> l2;
    std::vector<double> h1semi;
    std::vector<double> linf;
    std::vector<double> l4;
    std::vector<double> l6;
    std::vector<double> dissipation_cum;
    std::vector<double> energy_defect;
    std::vector<double> pressure_l2;
};

// Scalar trace of a stored trajectory (pressure column left empty unless the
// trajectory carries pressure nodes).
FlowTrace trace_trajectory(const Trajectory& traj);

// Worst relative defect of the true energy equality (no forcing work):
// max_j |E_j - E_0 + 2 D_j| / E_0. For the self-advected solves this is
// exactly twice the accumulated discrete work ledger, i.e. a direct reading
// of how much the time discretization violates the cancellation <u, F(u)> = 0.
double energy_equality_defect(const Trajectory& traj);

// ---- Picard iteration on [0, T_formula] ----

// One iteration u^(n+1) = heat flow of u0 + Duhamel of -(u^n . grad) u^n,
// i.e. the advective Stokes solve with Y = Z = the previous iterate.
Trajectory picard_step(const Trajectory& prev, const VectorField& u0, const TimeMesh& mesh);

struct PicardOptions {
    int m = 64;             // mesh intervals over [0, T_formula]
    double tol = 1e-8;      // stop when the sup-norm update falls below this
    int max_iters = 30;
};

struct PicardRun {
    double t_formula = 0.0;       // 1 / (32 (1 + c')^4 ||u0||_inf^2)
    std::vector<double> diffs;    // d_n = max_j ||u^(n+1) - u^n||_inf(t_j)
    std::vector<double> diffs_l2; // same in L2
    double lambda_observed = 0.0; // max of d_{n+1}/d_n past the first step
    int iterations = 0;
    double residual_l2 = 0.0;     // sup_t ||u - picard_step(u)||_2 at the fixed point
    double tol = 0.0;
};

// Iterate from the heat flow until the sup-norm update is below tol. The
// contraction factor on this horizon is c'/(sqrt(2)(1 + c')) < 1/sqrt(2) by
// the choice of T_formula, so non-contraction means the constant measurement
// or the resolution is wrong, and is thrown rather than returned. The
// returned trajectory is one more step applied to the converged iterate
// (which is what the residual is measured against).
std::pair<Trajectory, PicardRun> picard_solve(const VectorField& u0,
                                              const MeasuredConstants& mc,
                                              const PicardOptions& opts = {});

// ---- Existence horizons, blow-up floors ----

struct ExistenceTimes {
    double t_linf = 0.0; // 1/(32 (1+c')^4)            / ||u0||_inf^2
    double t_grad = 0.0; // (4 pi c' c_grad_heat)^{-4} / ||grad u0||^4
    double t_lp = 0.0;   // (c3(p) / ||u0||_p)^{2p/(p-3)}
    double p = 0.0;
};

// Guaranteed horizons from the three data norms; p <= 3 has no such bound
// and is rejected. Each is exactly homogeneous in the data: scaling u0 by
// alpha scales the entries by alpha^{-2}, alpha^{-4}, alpha^{-2p/(p-3)}.
ExistenceTimes existence_time_bounds(const VectorField& u0, const MeasuredConstants& mc,
                                     double p = 6.0);

struct BlowupFloors {
    double linf = 0.0; // ||u(t)||_inf  >= sqrt(c1) (T0 - t)^{-1/2}
    double grad = 0.0; // ||grad u(t)|| >= c2^{1/4} (T0 - t)^{-1/4}
    double lp = 0.0;   // ||u(t)||_p    >= c3(p) (T0 - t)^{-(1-3/p)/2}
};

// The existence horizons inverted: if the solution ends at T0, each norm must
// already exceed its floor at every earlier t. Requires t < T0.
BlowupFloors blowup_rate_floor(double T0, double t, double p, const MeasuredConstants& mc);

// Scan of hypothetical end times against a recorded trace: T0 survives only
// if every node satisfies all three floors (l4 or l6 is used for the Lp
// floor, so p must be 4 or 6). A resolved, decaying run admits none.
std::vector<double> admissible_blowup_candidates(const FlowTrace& trace,
                                                 const std::vector<double>& candidates,
                                                 double p, const MeasuredConstants& mc);

// ---- Mollified solve ----

// Volterra majorant phi(t) = ||u0||_inf + a int_0^t phi(s) (t-s)^{-1/2} ds,
// a = c_a c_moll eps^{-3/2} ||u0||_2, sampled on the mesh nodes. The solution
// grows like e^{pi a^2 t}, which overflows a double well inside the regimes
// of interest, so log_phi is always populated (via the log-space series) and
// phi holds exp of it (inf where it overflows). When the whole horizon fits
// in range the samples come from the product-integration solver instead,
// keeping the advertised route exact to its tolerance.
struct MajorantSamples {
    std::vector<double> t;
    std::vector<double> phi;
    std::vector<double> log_phi;
    double coupling = 0.0;     // the coefficient a above
    bool series_route = false; // true when the PI march would overflow
};

MajorantSamples volterra_majorant(double eps, double l2_u0, double linf_u0,
                                  const MeasuredConstants& mc, const TimeMesh& mesh);

struct LerayOptions {
    std::vector<double> checkpoints; // node times whose fields to keep
    bool pressure_trace = false;
    double tail_alarm = 1e-3;        // spectral tail fraction that flags the run
    bool majorant = true;
};

struct LerayRun {
    double epsilon = 0.0;
    TimeMesh mesh;
    FlowTrace trace;
    MajorantSamples majorant;
    bool resolved = true;            // no node tripped the tail alarm
    double tail_max = 0.0;
    double cancellation_max = 0.0;   // max |<u, F(u)>| / (||u|| ||grad u|| ||u||_inf)
    std::vector<double> checkpoint_times;
    std::vector<SpectralVector> checkpoints;
    SpectralVector final_u;
};

// Mollified flow d_t u = Lap u - P div((J_eps u) x u), advanced by the
// exponential predictor/corrector pair. Holds node fields only at the
// requested checkpoints (plus the final state) so long runs stay in memory;
// everything else lands in the trace. Requires 0 < eps < L/4 so the mollifier
// fits the fundamental cell. An under-resolved spectral tail flags the run
// rather than aborting it.
LerayRun leray_solve(const VectorField& u0, double eps, const TimeMesh& mesh,
                     const MeasuredConstants& mc, const LerayOptions& opts = {});

// ---- Consequence checks ----

// Worst-case growth of the separation of two trajectories on one mesh:
//   max over t1 < t2 of ||w(t2)||^2 / (||w(t1)||^2 exp(1/2 int ||u||_inf^2)),
// w = u - v. At most 1 + quadrature error when both are flows; note the
// exponent integrates the FIRST argument's sup norm, so the check is
// asymmetric. Separations below 1e-30 count as zero (identical runs pass).
double gronwall_separation_check(const Trajectory& u, const Trajectory& v);

struct SmallnessItem {
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// The three global-regularity smallness conditions, derived from the
// measured constants: q1 = ||u0||^2 ||u0||_inf against 1/(256 c''^3), and
// the H1 and Lp conditions reduced to q1 at the guaranteed smoothing time.
struct SmallnessReport {
    SmallnessItem linf; // ||u0||_2^2 ||u0||_inf
    SmallnessItem grad; // ||u0||_2   ||grad u0||_2
    SmallnessItem lp;   // ||u0||_2^{2(p-3)} ||u0||_p^p
    double p = 0.0;
    bool all() const { return linf.pass && grad.pass && lp.pass; }
};

SmallnessReport smallness_global_check(const VectorField& u0, const MeasuredConstants& mc,
                                       double p = 6.0);

// Largest observed ratios against the pressure interpolation bounds
//   ||p||_2 <= C ||grad u||^{3/2} ||u||^{1/2},   ||u||_4^2 <= same shape.
// Needs a run whose pressure was traced.
struct PressureRatios {
    double pressure_max = 0.0;
    double l4_max = 0.0;
};

PressureRatios pressure_cubed_bound_check(const LerayRun& run);

// If t2 - t1 is inside the window guaranteed by ||grad u(t1)||, verify the
// smoothing conclusions: ||u(t2)||_inf <= c_linf ||grad u(t1)|| (t2-t1)^{-1/4}
// and ||grad u(t2)|| <= c_grad ||grad u(t1)||, with c_linf = 2 c_grad_heat
// and c_grad = 2. A gap outside the window is NotApplicable, not a failure.
struct PersistenceReport {
    Verdict verdict = Verdict::NotApplicable;
    double window = 0.0;     // guaranteed persistence window from t1
    double gap = 0.0;        // t2 - t1
    double linf_ratio = 0.0; // measured / allowed, <= 1 passes
    double grad_ratio = 0.0;
    double c_linf = 0.0;
    double c_grad = 0.0;
};

PersistenceReport gradient_persistence_check(const Trajectory& traj, double t1, double t2,
                                             const MeasuredConstants& mc);

}  // namespace nslab
