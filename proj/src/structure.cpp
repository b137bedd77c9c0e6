#include "nslab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nslab/kernel_fits.hpp"
#include "nslab/weighted.hpp"

namespace nslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow4(double x) { return (x * x) * (x * x); }
double cube(double x) { return x * x * x; }

int find_time(const std::vector<double>& ts, double t, const char* who) {
    int best = -1;
    double gap = kInf;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        const double d = std::abs(ts[j] - t);
        if (d < gap) {
            gap = d;
            best = static_cast<int>(j);
        }
    }
    if (best < 0 || gap > 1e-9 * (1.0 + std::abs(t)))
        throw std::invalid_argument(std::string(who) + ": time was not recorded");
    return best;
}

double l2_distance(const SpectralVector& a, const SpectralVector& b) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += (a.c[c] - b.c[c]).abs2().sum();
    return std::sqrt(a.grid.L * a.grid.L * a.grid.L * s);
}

// nodes where the gradient norm grows at least rule.growth per eps halving,
// monotonically down the whole ladder
std::vector<char> trend_flags(const SweepResult& sweep, const TrendRule& rule) {
    const std::size_t ne = sweep.eps.size();
    if (ne < 3)
        throw std::invalid_argument("singular-time detection needs at least 3 ladder rungs");
    if (!(rule.growth > 1.0))
        throw std::invalid_argument("trend rule growth factor must exceed 1");
    const std::size_t nt = sweep.traces[0].t.size();
    std::vector<char> flags(nt, 0);
    for (std::size_t j = 0; j < nt; ++j) {
        bool sing = true;
        for (std::size_t i = 0; i + 1 < ne && sing; ++i) {
            const double ratio = sweep.eps[i] / sweep.eps[i + 1];
            const double required = std::pow(rule.growth, std::log2(ratio));
            const double g0 = sweep.traces[i].h1semi[j];
            const double g1 = sweep.traces[i + 1].h1semi[j];
            sing = g0 > 0.0 && g1 >= required * g0;
        }
        flags[j] = sing ? 1 : 0;
    }
    return flags;
}

struct NbrMeasure {
    double length = 0.0;
    int components = 0;
};

// exact length and component count of the delta-neighbourhood of a sorted
// union of closed intervals
NbrMeasure neighbourhood(const std::vector<std::pair<double, double>>& base, double delta) {
    NbrMeasure m;
    double lo = 0.0, hi = -kInf;
    bool open = false;
    for (const auto& iv : base) {
        const double a = iv.first - delta;
        const double b = iv.second + delta;
        if (!open || a > hi) {
            if (open) {
                m.length += hi - lo;
                ++m.components;
            }
            lo = a;
            hi = b;
            open = true;
        } else {
            hi = std::max(hi, b);
        }
    }
    if (open) {
        m.length += hi - lo;
        ++m.components;
    }
    return m;
}

BoxDimEstimate dimension_from_base(std::vector<std::pair<double, double>> base,
                                   std::vector<double> deltas) {
    std::sort(deltas.begin(), deltas.end(), std::greater<double>());
    if (deltas.size() < 4 || !(deltas.front() >= 100.0 * deltas.back()) ||
        !(deltas.back() > 0.0))
        throw std::invalid_argument(
            "box_dimension_estimate: the delta ladder must span at least two decades");
    std::sort(base.begin(), base.end());

    BoxDimEstimate est;
    est.delta = deltas;
    for (const double d : deltas) {
        const NbrMeasure m = neighbourhood(base, d);
        est.measure.push_back(m.length);
        est.count.push_back(m.components);
    }

    // least squares of log measure against log delta; dimension = 1 - slope
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        if (!(est.measure[k] > 0.0)) continue;
        const double x = std::log(deltas[k]);
        const double y = std::log(est.measure[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double den = n * sxx - sx * sx;
    if (n < 3 || !(den > 0.0)) return est;  // empty or degenerate set: dimension 0
    const double slope = (n * sxy - sx * sy) / den;
    const double icept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        if (!(est.measure[k] > 0.0)) continue;
        const double r = std::log(est.measure[k]) - slope * std::log(deltas[k]) - icept;
        ss += r * r;
    }
    est.dimension = 1.0 - slope;
    if (n > 2) est.std_error = std::sqrt(ss / (n - 2) / (den / n));
    return est;
}

}  // namespace

double IntervalSet::total_length() const {
    double s = 0.0;
    for (const auto& iv : intervals)
        s += std::max(0.0, std::min(iv.second, horizon) - std::max(iv.first, 0.0));
    return s;
}

IntervalSet make_interval_set(double horizon,
                              std::vector<std::pair<double, double>> intervals) {
    if (!(horizon > 0.0)) throw std::invalid_argument("interval set: horizon must be positive");
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].first >= 0.0) || !(intervals[i].second > intervals[i].first))
            throw std::invalid_argument("interval set: intervals must satisfy 0 <= a < b");
        if (i + 1 < intervals.size() && intervals[i].second > intervals[i + 1].first)
            throw std::invalid_argument("interval set: intervals overlap");
    }
    IntervalSet s;
    s.horizon = horizon;
    s.intervals = std::move(intervals);
    return s;
}

IntervalSet complement(const IntervalSet& s) {
    const double tiny = 1e-15 * std::max(1.0, s.horizon);
    std::vector<std::pair<double, double>> out;
    double prev = 0.0;
    for (const auto& iv : s.intervals) {
        const double a = std::min(iv.first, s.horizon);
        if (a > prev + tiny) out.emplace_back(prev, a);
        prev = std::max(prev, std::min(iv.second, s.horizon));
        if (prev >= s.horizon) break;
    }
    if (prev + tiny < s.horizon) out.emplace_back(prev, s.horizon);
    return make_interval_set(s.horizon, std::move(out));
}

SweepResult eps_sweep(const VectorField& u0, const std::vector<double>& eps_ladder,
                      const TimeMesh& mesh, const MeasuredConstants& mc,
                      const SweepOptions& opts) {
    if (eps_ladder.empty()) throw std::invalid_argument("eps_sweep: empty ladder");
    for (std::size_t i = 1; i < eps_ladder.size(); ++i)
        if (!(eps_ladder[i] < eps_ladder[i - 1]))
            throw std::invalid_argument("eps_sweep: ladder must be strictly decreasing");
    for (const double c : opts.checkpoints)
        if (c < 0.0 || c > mesh.horizon() + 1e-12)
            throw std::invalid_argument("eps_sweep: checkpoint outside the horizon");

    SweepResult sw;
    sw.grid = u0.grid;
    sw.mesh = mesh;
    sw.eps = eps_ladder;

    LerayOptions lo;
    lo.checkpoints = opts.checkpoints;
    lo.pressure_trace = opts.pressure_trace;
    lo.majorant = opts.majorant;
    for (const double eps : eps_ladder) {
        LerayRun run = leray_solve(u0, eps, mesh, mc, lo);
        sw.resolved = sw.resolved && run.resolved;
        if (sw.checkpoints.empty()) {
            sw.checkpoint_times = run.checkpoint_times;
        } else if (run.checkpoint_times.size() != sw.checkpoint_times.size()) {
            throw std::logic_error("eps_sweep: rungs disagree on checkpoint times");
        }
        sw.traces.push_back(std::move(run.trace));
        sw.checkpoints.push_back(std::move(run.checkpoints));
    }

    const std::size_t nt = sw.checkpoint_times.size();
    const std::size_t ne = eps_ladder.size();
    sw.pairwise.assign(nt, std::vector<std::vector<double>>(ne, std::vector<double>(ne, 0.0)));
    for (std::size_t tx = 0; tx < nt; ++tx)
        for (std::size_t i = 0; i < ne; ++i)
            for (std::size_t j = i + 1; j < ne; ++j) {
                const double d = l2_distance(sw.checkpoints[i][tx], sw.checkpoints[j][tx]);
                sw.pairwise[tx][i][j] = d;
                sw.pairwise[tx][j][i] = d;
            }
    return sw;
}

double tail_constant_calibrate(const std::vector<FlowTrace>& traces,
                               const std::vector<double>& times) {
    double best = 0.0;
    for (const FlowTrace& tr : traces) {
        if (tr.pressure_l2.size() != tr.t.size() || tr.t.empty())
            throw std::invalid_argument("tail_constant_calibrate: traces must carry the pressure");
        const double m = tr.l2[0];
        if (!(m > 0.0)) continue;
        // cumulative trapezoids of ||grad u||, ||p||, ||u||_4^2
        const std::size_t n = tr.t.size();
        std::vector<double> i1(n, 0.0), i2(n, 0.0), i3(n, 0.0);
        for (std::size_t j = 1; j < n; ++j) {
            const double dt = tr.t[j] - tr.t[j - 1];
            i1[j] = i1[j - 1] + 0.5 * dt * (tr.h1semi[j - 1] + tr.h1semi[j]);
            i2[j] = i2[j - 1] + 0.5 * dt * (tr.pressure_l2[j - 1] + tr.pressure_l2[j]);
            i3[j] = i3[j - 1] + 0.5 * dt * (tr.l4[j - 1] * tr.l4[j - 1] + tr.l4[j] * tr.l4[j]);
        }
        for (const double t : times) {
            const int j = find_time(tr.t, t, "tail_constant_calibrate");
            const double tt = tr.t[j];
            if (!(tt > 0.0)) continue;
            const double num = m * (2.0 * i1[j] + 2.0 * i2[j] + i3[j]);
            const double den = m * m * std::sqrt(tt) + m * m * m * std::pow(tt, 0.25);
            best = std::max(best, num / den);
        }
    }
    return best;
}

double tail_energy_bound_check(const LerayRun& run, double r1, double r2, double t,
                               double c_tail) {
    const double L = run.final_u.grid.L;
    if (!(0.0 < r1 && r1 < r2 && r2 < L / 2.0))
        throw std::invalid_argument("tail_energy_bound_check: need 0 < R1 < R2 < L/2");
    const int i0 = find_time(run.checkpoint_times, 0.0, "tail_energy_bound_check");
    const int it = find_time(run.checkpoint_times, t, "tail_energy_bound_check");

    const double lhs = tail_energy(to_physical(run.checkpoints[it]), r2);
    const double tail0 = tail_energy(to_physical(run.checkpoints[i0]), r1);
    const double m = run.trace.l2[0];
    const double tt = run.checkpoint_times[it];
    const double rhs =
        tail0 + c_tail * (m * m * std::sqrt(tt) + m * m * m * std::pow(tt, 0.25)) / (r2 - r1);
    return rhs - lhs;
}

IntervalSet detect_singular_times(const SweepResult& sweep, const TrendRule& rule) {
    const std::vector<char> flags = trend_flags(sweep, rule);
    const std::vector<double>& t = sweep.traces[0].t;
    const double horizon = sweep.mesh.horizon();
    const std::size_t nt = flags.size();

    std::vector<std::pair<double, double>> iv;
    std::size_t j = 0;
    while (j < nt) {
        if (flags[j]) {
            ++j;
            continue;
        }
        std::size_t k = j;
        while (k + 1 < nt && !flags[k + 1]) ++k;
        const double a = (j == 0) ? 0.0 : t[j - 1];
        const double b = (k + 1 == nt) ? horizon : t[k + 1];
        if (b > a) iv.emplace_back(a, b);
        j = k + 1;
    }
    return make_interval_set(horizon, std::move(iv));
}

SqrtBudget sqrt_length_budget(const IntervalSet& set, double u0_norm,
                              const MeasuredConstants& mc) {
    if (!(mc.c_prime > 0.0))
        throw std::invalid_argument("sqrt_length_budget: constants carry no sup-norm measurement");
    SqrtBudget b;
    for (const auto& iv : set.intervals)
        if (std::isfinite(iv.second)) b.sum += std::sqrt(iv.second - iv.first);
    // an epoch ending at b spends at least 2 sqrt(c2 (b-a)) of the total
    // dissipation ||u0||^2 / 2, with c2 the gradient floor constant
    const double sqrt_c2 = 1.0 / ((4.0 * M_PI * mc.c_prime * mc.c_grad_heat) *
                                  (4.0 * M_PI * mc.c_prime * mc.c_grad_heat));
    b.budget = u0_norm * u0_norm / (4.0 * sqrt_c2);
    return b;
}

std::vector<double> default_delta_ladder() {
    std::vector<double> d;
    for (int k = 0; k <= 10; ++k) d.push_back(0.1 * std::pow(0.5, k));
    return d;
}

BoxDimEstimate box_dimension_estimate(const std::vector<double>& points,
                                      const std::vector<double>& deltas) {
    std::vector<std::pair<double, double>> base;
    base.reserve(points.size());
    for (const double p : points) base.emplace_back(p, p);
    return dimension_from_base(std::move(base), deltas);
}

BoxDimEstimate box_dimension_estimate(const IntervalSet& set,
                                      const std::vector<double>& deltas) {
    std::vector<std::pair<double, double>> base;
    for (const auto& iv : set.intervals) {
        const double a = std::max(0.0, iv.first);
        const double b = std::min(iv.second, set.horizon);
        if (b >= a) base.emplace_back(a, b);
    }
    return dimension_from_base(std::move(base), deltas);
}

LateTimeReport late_time_decay_check(const FlowTrace& trace, double u0_norm,
                                     const MeasuredConstants& mc) {
    if (trace.t.empty()) throw std::invalid_argument("late_time_decay_check: empty trace");
    if (!(u0_norm > 0.0)) throw std::invalid_argument("late_time_decay_check: zero data norm");
    if (!(mc.c_prime > 0.0))
        throw std::invalid_argument(
            "late_time_decay_check: constants carry no sup-norm measurement");

    LateTimeReport rep;
    const double e1 = 1.0 / (256.0 * cube(mc.c_dprime));
    const double c2 = mc.c_grad_heat;
    // data already under the primary smallness condition decays from t = 0;
    // otherwise wait out the energy-forced drop of ||u|| ||grad u||
    if (trace.l2[0] * trace.l2[0] * trace.linf[0] < e1)
        rep.threshold = 0.0;
    else
        rep.threshold = pow4(u0_norm) * (8.0 * M_PI * mc.c_prime * c2 * c2) / (2.0 * e1);

    const double horizon = trace.t.back();
    if (!(horizon > rep.threshold)) return rep;  // too short to say anything

    const double start = std::max(rep.threshold, 0.25 * horizon);
    std::vector<double> ts, grads, linfs;
    for (std::size_t j = 0; j < trace.t.size(); ++j) {
        const double t = trace.t[j];
        if (t < start || !(t > 0.0)) continue;
        if (!(trace.h1semi[j] > 0.0) || !(trace.linf[j] > 0.0)) continue;
        ts.push_back(t);
        grads.push_back(trace.h1semi[j]);
        linfs.push_back(trace.linf[j]);
        rep.c_grad = std::max(rep.c_grad, std::sqrt(t) * trace.h1semi[j] / u0_norm);
        rep.c_linf = std::max(rep.c_linf, std::pow(t, 0.75) * trace.linf[j] / u0_norm);
    }
    rep.window_nodes = static_cast<int>(ts.size());
    if (rep.window_nodes < 5) return rep;

    rep.slope_grad = loglog_fit(ts, grads).exponent;
    rep.slope_linf = loglog_fit(ts, linfs).exponent;
    const bool ok = rep.slope_grad <= -0.5 + 0.1 && rep.slope_linf <= -0.75 + 0.1;
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    return rep;
}

ConvergenceReport strong_l2_convergence_check(const SweepResult& sweep,
                                              const std::vector<double>& t_list) {
    const std::size_t ne = sweep.eps.size();
    const std::vector<char> flags = trend_flags(sweep, TrendRule{});

    ConvergenceReport rep;
    bool all_ok = true;
    int n_checked = 0;
    for (const double t : t_list) {
        const int tx = find_time(sweep.checkpoint_times, t, "strong_l2_convergence_check");
        const int node = find_time(sweep.traces[0].t, sweep.checkpoint_times[tx],
                                   "strong_l2_convergence_check");
        rep.t.push_back(sweep.checkpoint_times[tx]);
        rep.distance_gaps.emplace_back();
        rep.norm_gaps.emplace_back();
        if (flags[node]) {
            rep.checked.push_back(0);
            continue;
        }
        rep.checked.push_back(1);
        ++n_checked;

        std::vector<double>& dg = rep.distance_gaps.back();
        std::vector<double>& ng = rep.norm_gaps.back();
        for (std::size_t i = 0; i + 1 < ne; ++i) {
            dg.push_back(sweep.pairwise[tx][i][i + 1]);
            ng.push_back(std::abs(l2_norm(sweep.checkpoints[i][tx]) -
                                  l2_norm(sweep.checkpoints[i + 1][tx])));
        }
        for (std::size_t i = 0; i + 1 < dg.size(); ++i) {
            const double grace = 1e-12 * (1.0 + dg[0] + ng[0]);
            all_ok = all_ok && dg[i + 1] <= dg[i] + grace && ng[i + 1] <= ng[i] + grace;
        }
    }
    if (n_checked > 0) rep.verdict = all_ok ? Verdict::Pass : Verdict::Fail;
    return rep;
}

}  // namespace nslab
