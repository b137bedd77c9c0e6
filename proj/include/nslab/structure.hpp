#pragma once

#include <utility>
#include <vector>

#include "nslab/nse.hpp"

namespace nslab {

// Ordered disjoint open intervals (a_i, b_i) in (0, inf), with a stated
// horizon for complement taking. At most the last b may be infinite.
struct IntervalSet {
    double horizon = 0.0;
    std::vector<std::pair<double, double>> intervals;

    double total_length() const;  // finite parts only, clipped to the horizon
};

// Validates and normalizes (sorts, rejects overlap or a >= b) the raw list.
IntervalSet make_interval_set(double horizon, std::vector<std::pair<double, double>> intervals);

// Open complement within (0, horizon); degenerate slivers are dropped, so
// complement(complement(s)) round-trips s up to zero-length boundary pieces.
IntervalSet complement(const IntervalSet& s);

// ---- The mollification ladder ----

struct SweepOptions {
    std::vector<double> checkpoints;
    bool pressure_trace = false;
    bool majorant = false;
};

// One solve per rung of a decreasing eps ladder, all on a common grid and
// mesh: traces, checkpoint fields, and the pairwise L2 distance matrix at
// every checkpoint time. `resolved` drops when any rung trips the tail alarm.
struct SweepResult {
    GridSpec grid;
    TimeMesh mesh;
    std::vector<double> eps;
    std::vector<FlowTrace> traces;
    std::vector<double> checkpoint_times;
    std::vector<std::vector<SpectralVector>> checkpoints;  // [rung][time]
    std::vector<std::vector<std::vector<double>>> pairwise;  // [time][i][j]
    bool resolved = true;
};

SweepResult eps_sweep(const VectorField& u0, const std::vector<double>& eps_ladder,
                      const TimeMesh& mesh, const MeasuredConstants& mc,
                      const SweepOptions& opts = {});

// ---- Tail-energy separation ----

// Calibrates the constant in the separation bound: the largest observed
//   ||u0|| (2 int ||grad u|| + 2 int ||p|| + int ||u||_4^2)
//   / (||u0||^2 sqrt(t) + ||u0||^3 t^{1/4})
// over the given traces and sample times. Traces must carry the pressure.
double tail_constant_calibrate(const std::vector<FlowTrace>& traces,
                               const std::vector<double>& times);

// RHS - LHS of the separation bound
//   int_{|x|>R2} |u(t)|^2 <= int_{|x|>R1} |u0|^2
//                            + c_tail (||u0||^2 sqrt(t) + ||u0||^3 t^{1/4}) / (R2 - R1);
// nonnegative slack means the bound held. The run must have checkpointed
// t = 0 and t, and 0 < R1 < R2 < L/2.
double tail_energy_bound_check(const LerayRun& run, double r1, double r2, double t,
                               double c_tail);

// ---- Singular-time proxy set ----

// A node is flagged when ||grad u_eps(t)|| grows by at least `growth` per
// eps halving, monotonically down the whole ladder. Ratios only, so the rule
// is invariant under rescaling the traces.
struct TrendRule {
    double growth = 2.0;
};

// Returns the complement of the flagged set: the maximal open intervals of
// non-flagged times within the sweep horizon. Needs at least 3 rungs.
IntervalSet detect_singular_times(const SweepResult& sweep, const TrendRule& rule = {});

// Sum of sqrt(b_i - a_i) over the finite intervals, against the budget
// c ||u0||^2 with c from the gradient blow-up floor: an interval of
// regularity of length ell costs at least sqrt(ell) of the total dissipation.
struct SqrtBudget {
    double sum = 0.0;
    double budget = 0.0;
};

SqrtBudget sqrt_length_budget(const IntervalSet& set, double u0_norm,
                              const MeasuredConstants& mc);

// ---- Box-counting dimension ----

// Minkowski form: |S_delta| is the exact length of the delta-neighbourhood
// (interval arithmetic, not grid counts), N_delta its component count, and
// the dimension is 1 - slope of log |S_delta| against log delta.
struct BoxDimEstimate {
    std::vector<double> delta;
    std::vector<double> measure;
    std::vector<int> count;
    double dimension = 0.0;
    double std_error = 0.0;
};

// geometric ladder, ratio 1/2, spanning [1e-4, 1e-1]
std::vector<double> default_delta_ladder();

// The estimator needs a ladder spanning at least two decades. The interval
// overload measures the union of the (closed) intervals themselves, clipped
// to the horizon -- hand it complement(epochs) to measure the flagged set.
BoxDimEstimate box_dimension_estimate(const std::vector<double>& points,
                                      const std::vector<double>& deltas);
BoxDimEstimate box_dimension_estimate(const IntervalSet& set,
                                      const std::vector<double>& deltas);

// ---- Late-time decay ----

// Past the threshold c ||u0||^4 (zero when the data already satisfies the
// primary smallness condition) the flow is in the decaying regime: fit the
// log-log tails of ||grad u|| and ||u||_inf over the late window and require
// slopes <= -1/2 + 0.1 and <= -3/4 + 0.1. The measured prefactors are
// reported, not asserted. A horizon short of the threshold is NotApplicable.
struct LateTimeReport {
    Verdict verdict = Verdict::NotApplicable;
    double threshold = 0.0;
    double slope_grad = 0.0;
    double slope_linf = 0.0;
    double c_grad = 0.0;  // max t^{1/2} ||grad u|| / ||u0|| over the window
    double c_linf = 0.0;  // max t^{3/4} ||u||_inf / ||u0||
    int window_nodes = 0;
};

LateTimeReport late_time_decay_check(const FlowTrace& trace, double u0_norm,
                                     const MeasuredConstants& mc);

// ---- Strong L2 convergence down the ladder ----

// At each requested checkpoint time not flagged by the trend rule: the
// consecutive-rung distances ||u_{e_i} - u_{e_{i+1}}||_2 must be
// non-increasing down the ladder, and so must the norm gaps
// | ||u_{e_i}|| - ||u_{e_{i+1}}|| |. Flagged times are skipped and recorded.
struct ConvergenceReport {
    Verdict verdict = Verdict::NotApplicable;
    std::vector<double> t;
    std::vector<char> checked;
    std::vector<std::vector<double>> distance_gaps;  // per time, per rung pair
    std::vector<std::vector<double>> norm_gaps;
};

ConvergenceReport strong_l2_convergence_check(const SweepResult& sweep,
                                              const std::vector<double>& t_list);

}  // namespace nslab
