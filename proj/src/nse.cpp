#include "nslab/nse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>

#include "nslab/kernel_fits.hpp"
#include "nslab/mollifier.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/rng.hpp"

namespace nslab {

namespace {

double cube(double x) { return x * x * x; }
double pow4(double x) { return (x * x) * (x * x); }

double spectral_energy(const SpectralVector& u) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += u.c[c].abs2().sum();
    return u.grid.L * u.grid.L * u.grid.L * s;
}

// Exact H^1 -> L^inf constant of the heat semigroup on this grid: the
// Cauchy-Schwarz bound sum_k |e^{-t lam} c_k| <= sqrt(S(t)) ||grad v|| L^{-3/2}
// with S(t) = sum_{k != 0} e^{-2 t lam_k} / lam_k is attained by the matching
// data, so maximizing t^{1/4} sqrt(S(t)) over a log ladder gives the operator
// norm itself, not an estimate of it.
double heat_grad_ladder(const GridSpec& g) {
    const RArray& lam = laplacian_symbol(g);
    double best = 0.0;
    for (int k = 0; k <= 40; ++k) {
        const double t = 1e-3 * std::pow(1e4, k / 40.0);
        double s = 0.0;
        for (Eigen::Index m = 0; m < lam.size(); ++m)
            if (lam[m] > 0.0) s += std::exp(-2.0 * t * lam[m]) / lam[m];
        best = std::max(best, std::pow(t, 0.25) * std::sqrt(s) / std::pow(g.L, 1.5));
    }
    return best;
}

// Duhamel sup-norm constant: drive the first correction with the heat flow
// of a random smooth solenoidal field and take the worst-case ratio of the
// correction's sup norm against the product-integration value of
// int ||v(s)||_inf^2 (t - s)^{-1/2} ds, over nodes and seeds.
double measure_sup_constant(const GridSpec& g, int mesh_m, double mesh_t,
                            std::uint64_t seed, int batch) {
    const TimeMesh mesh = TimeMesh::uniform(mesh_t, mesh_m);
    const StepKernel kern(g, mesh.dt(0));
    const CounterRng root{seed};
    double best = 0.0;
    for (int b = 0; b < batch; ++b) {
        const std::uint64_t fseed = root.bits(static_cast<std::uint64_t>(b));
        const VectorField u0 = random_solenoidal(g, fseed, 2.0, 1.0, kInfinity);
        SpectralVector u0hat = to_spectral(u0);

        std::vector<SpectralVector> v(mesh_m + 1);
        std::vector<double> vinf2(mesh_m + 1);
        for (int j = 0; j <= mesh_m; ++j) {
            v[j] = heat_evolve(u0hat, mesh.t[j]);
            const double n = lp_norm(to_physical(v[j]), kInfinity);
            vinf2[j] = n * n;
        }

        SpectralVector w(g);
        SpectralVector f0 = advective_forcing(v[0], v[0]);
        for (int j = 0; j < mesh_m; ++j) {
            SpectralVector f1 = advective_forcing(v[j + 1], v[j + 1]);
            kern.advance(w, f0, f1);
            f0 = std::move(f1);
            const double num = lp_norm(to_physical(w), kInfinity);
            const std::vector<double> wts = duhamel_weights(mesh, j + 1, 0.5);
            double den = 0.0;
            for (int i = 0; i <= j + 1; ++i) den += wts[i] * vinf2[i];
            if (den > 0.0) best = std::max(best, num / den);
        }
    }
    return best;
}

int node_index(const TimeMesh& mesh, double t, const char* who) {
    int best = 0;
    double gap = std::abs(mesh.t[0] - t);
    for (int j = 1; j < static_cast<int>(mesh.t.size()); ++j) {
        const double d = std::abs(mesh.t[j] - t);
        if (d < gap) {
            gap = d;
            best = j;
        }
    }
    double tol = 1e-9 * (1.0 + mesh.horizon());
    if (best > 0) tol = std::max(tol, 0.5 * mesh.dt(best - 1));
    if (gap > tol)
        throw std::invalid_argument(std::string(who) + ": time does not lie on a mesh node");
    return best;
}

// March the Duhamel correction u(t) = e^{t Lap} u0 + int e^{(t-s) Lap} F_n(s)
// with the forcing frozen to the previous iterate's nodes. Both forcing
// endpoints of every step are known, so no predictor is involved; `out`, when
// given, receives the full trajectory and its energy ledger.
std::vector<SpectralVector> correction_march(const SpectralVector& u0hat,
                                             const std::vector<SpectralVector>& prev,
                                             const TimeMesh& mesh, Trajectory* out) {
    const GridSpec& g = u0hat.grid;
    const int m = mesh.intervals();
    const double vol = g.L * g.L * g.L;

    std::vector<SpectralVector> nodes(m + 1);
    nodes[0] = u0hat;

    if (out) {
        out->grid = g;
        out->mesh = mesh;
        out->energy.assign(1, spectral_energy(u0hat));
        out->dissipation_cum.assign(1, 0.0);
        out->work_cum.assign(1, 0.0);
    }

    SpectralVector u = u0hat;
    std::unique_ptr<StepKernel> kern;
    SpectralVector f0 = advective_forcing(prev[0], prev[0]);
    double diss = 0.0, work = 0.0;
    for (int j = 0; j < m; ++j) {
        const double dt = mesh.dt(j);
        if (!kern || std::abs(kern->dt() - dt) > 1e-15 * dt)
            kern = std::make_unique<StepKernel>(g, dt);
        SpectralVector f1 = advective_forcing(prev[j + 1], prev[j + 1]);
        const ModeStepSums s = kern->advance(u, f0, f1);
        f0 = std::move(f1);
        nodes[j + 1] = u;
        if (out) {
            diss += vol * s.diss_int;
            work += vol * s.work_int;
            out->energy.push_back(spectral_energy(u));
            out->dissipation_cum.push_back(diss);
            out->work_cum.push_back(work);
        }
    }
    if (out) out->u = nodes;
    return nodes;
}

// ||e^{t Lap} v||_inf <= C_p ||v||_p t^{-3/(2p)}: C_p is the conjugate
// Lebesgue norm of the unit-time Gaussian.
double heat_lp_constant(double p) {
    const double pc = p / (p - 1.0);
    return std::pow(4.0 * M_PI, -1.5 * (1.0 - 1.0 / pc)) * std::pow(pc, -1.5 / pc);
}

// c3(p) in T = (c3(p) / ||u0||_p)^{2p/(p-3)}: the optimal-majorant constant
// 1 / (4 C_p c' B(1 - 3/p, 1/2)), degenerating to zero as p -> 3+.
double lp_horizon_constant(double p, const MeasuredConstants& mc) {
    const double cp = heat_lp_constant(p);
    const double b = std::beta(1.0 - 3.0 / p, 0.5);
    return 1.0 / (4.0 * cp * mc.c_prime * b);
}

}  // namespace

MeasuredConstants measure_constants(const GridSpec& g, int mesh_m, double mesh_t,
                                    std::uint64_t seed, int batch) {
    using Key = std::tuple<double, int, int, double, std::uint64_t, int>;
    static std::map<Key, MeasuredConstants> cache;
    const Key key{g.L, g.N, mesh_m, mesh_t, seed, batch};
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    if (batch < 0) throw std::invalid_argument("measure_constants: negative batch");

    MeasuredConstants mc;
    mc.c_a = kernel_decay_constant(KernelNorm::GradOseenL1, 0.5);
    mc.c_b = grad_oseen_sup_constant();
    mc.c_dprime = std::max(mc.c_a, mc.c_b);
    mc.c_oseen_l2 = kernel_decay_constant(KernelNorm::OseenL2, 0.75);
    mc.c_moll = mollifier_eta_l2();
    mc.c_heat_linf = std::pow(8.0 * M_PI, -0.75);
    mc.c_grad_heat = heat_grad_ladder(g);
    if (batch > 0) {
        mc.c_prime = measure_sup_constant(g, mesh_m, mesh_t, seed, batch);
        // the batch ratio is bounded by the kernel constant; exceeding it
        // means the march or the weights are broken, not the batch unlucky
        if (mc.c_prime > 1.1 * mc.c_a)
            throw std::runtime_error("measure_constants: batch ratio exceeds its kernel ceiling");
    }
    mc.grid = g;
    mc.mesh_m = mesh_m;
    mc.mesh_t = mesh_t;
    mc.seed = seed;
    mc.batch = batch;
    cache.emplace(key, mc);
    return mc;
}

FlowTrace trace_trajectory(const Trajectory& traj) {
    FlowTrace tr;
    const double e0 = traj.energy.empty() ? 0.0 : traj.energy[0];
    for (std::size_t j = 0; j < traj.u.size(); ++j) {
        const NormReport r = norm_report(traj.u[j]);
        tr.t.push_back(traj.mesh.t[j]);
        tr.l2.push_back(r.l2);
        tr.h1semi.push_back(r.h1semi);
        tr.linf.push_back(r.linf);
        tr.l4.push_back(r.l4);
        tr.l6.push_back(r.l6);
        tr.dissipation_cum.push_back(2.0 * traj.dissipation_cum[j]);
        const double defect = traj.energy[j] - e0 + 2.0 * traj.dissipation_cum[j];
        tr.energy_defect.push_back(e0 > 0.0 ? std::abs(defect) / e0 : 0.0);
        if (!traj.p.empty()) tr.pressure_l2.push_back(lp_norm(traj.p[j], 2.0));
    }
    return tr;
}

double energy_equality_defect(const Trajectory& traj) {
    if (traj.energy.empty()) return 0.0;
    const double e0 = traj.energy[0];
    if (!(e0 > 0.0)) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.energy.size(); ++j)
        worst = std::max(worst,
                         std::abs(traj.energy[j] - e0 + 2.0 * traj.dissipation_cum[j]) / e0);
    return worst;
}

Trajectory picard_step(const Trajectory& prev, const VectorField& u0, const TimeMesh& mesh) {
    if (prev.u.size() != mesh.t.size())
        throw std::invalid_argument("picard_step: iterate does not cover the mesh");
    const auto at_node = [&](double t) {
        return to_physical(prev.u[node_index(mesh, t, "picard_step")]);
    };
    return stokes_solve_advective(u0, at_node, at_node, mesh);
}

std::pair<Trajectory, PicardRun> picard_solve(const VectorField& u0,
                                              const MeasuredConstants& mc,
                                              const PicardOptions& opts) {
    const GridSpec& g = u0.grid;
    SpectralVector u0hat = to_spectral(u0);
    dealias(u0hat);
    require_solenoidal(u0hat, "picard_solve");
    const double m_inf = lp_norm(to_physical(u0hat), kInfinity);
    if (!(m_inf > 0.0)) throw std::invalid_argument("picard_solve: zero data");
    if (!(mc.c_prime > 0.0))
        throw std::invalid_argument("picard_solve: constants carry no sup-norm measurement");

    PicardRun run;
    run.t_formula = 1.0 / (32.0 * pow4(1.0 + mc.c_prime) * m_inf * m_inf);
    run.tol = opts.tol;
    const TimeMesh mesh = TimeMesh::uniform(run.t_formula, opts.m);

    std::vector<SpectralVector> cur(opts.m + 1);
    for (int j = 0; j <= opts.m; ++j) cur[j] = heat_evolve(u0hat, mesh.t[j]);

    bool converged = false;
    for (int n = 0; n < opts.max_iters && !converged; ++n) {
        std::vector<SpectralVector> next = correction_march(u0hat, cur, mesh, nullptr);
        double dinf = 0.0, dl2 = 0.0;
        SpectralVector diff(g);
        for (int j = 0; j <= opts.m; ++j) {
            for (int c = 0; c < 3; ++c) diff.c[c] = next[j].c[c] - cur[j].c[c];
            dl2 = std::max(dl2, l2_norm(diff));
            dinf = std::max(dinf, lp_norm(to_physical(diff), kInfinity));
        }
        run.diffs.push_back(dinf);
        run.diffs_l2.push_back(dl2);
        cur.swap(next);
        ++run.iterations;
        converged = dinf <= opts.tol;
    }
    if (!converged)
        throw std::runtime_error(
            "picard_solve: iteration failed to contract; the sup-norm constant or the "
            "resolution does not support this data");

    for (std::size_t n = 1; n < run.diffs.size(); ++n)
        if (run.diffs[n - 1] > 0.0)
            run.lambda_observed = std::max(run.lambda_observed, run.diffs[n] / run.diffs[n - 1]);

    // one more step both returns the reported trajectory and measures the
    // fixed-point residual against the converged iterate
    Trajectory traj;
    correction_march(u0hat, cur, mesh, &traj);
    SpectralVector diff(g);
    for (int j = 0; j <= opts.m; ++j) {
        for (int c = 0; c < 3; ++c) diff.c[c] = traj.u[j].c[c] - cur[j].c[c];
        run.residual_l2 = std::max(run.residual_l2, l2_norm(diff));
    }
    return {std::move(traj), std::move(run)};
}

ExistenceTimes existence_time_bounds(const VectorField& u0, const MeasuredConstants& mc,
                                     double p) {
    if (!(p > 3.0))
        throw std::invalid_argument("existence_time_bounds: the Lp horizon needs p > 3");
    if (!(mc.c_prime > 0.0))
        throw std::invalid_argument("existence_time_bounds: constants carry no sup-norm measurement");
    const SpectralVector uh = to_spectral(u0);
    const double m_inf = lp_norm(u0, kInfinity);
    const double grad = h1_seminorm(uh);
    const double mp = lp_norm(u0, p);

    ExistenceTimes te;
    te.p = p;
    te.t_linf = 1.0 / (32.0 * pow4(1.0 + mc.c_prime) * (m_inf * m_inf));
    te.t_grad = 1.0 / (pow4(4.0 * M_PI * mc.c_prime * mc.c_grad_heat) * pow4(grad));
    te.t_lp = std::pow(lp_horizon_constant(p, mc) / mp, 2.0 * p / (p - 3.0));
    return te;
}

BlowupFloors blowup_rate_floor(double T0, double t, double p, const MeasuredConstants& mc) {
    if (!(t < T0))
        throw std::invalid_argument("blowup_rate_floor: only defined before the end time");
    if (!(p > 3.0)) throw std::invalid_argument("blowup_rate_floor: needs p > 3");
    const double gap = T0 - t;
    BlowupFloors f;
    f.linf = std::sqrt(1.0 / (32.0 * pow4(1.0 + mc.c_prime)) / gap);
    f.grad = 1.0 / (4.0 * M_PI * mc.c_prime * mc.c_grad_heat) * std::pow(gap, -0.25);
    f.lp = lp_horizon_constant(p, mc) * std::pow(gap, -0.5 * (1.0 - 3.0 / p));
    return f;
}

std::vector<double> admissible_blowup_candidates(const FlowTrace& trace,
                                                 const std::vector<double>& candidates,
                                                 double p, const MeasuredConstants& mc) {
    const std::vector<double>* lp = nullptr;
    if (p == 4.0) lp = &trace.l4;
    else if (p == 6.0) lp = &trace.l6;
    else throw std::invalid_argument("admissible_blowup_candidates: traced norms cover p = 4, 6");

    std::vector<double> admitted;
    for (const double T0 : candidates) {
        bool ok = false;
        for (std::size_t j = 0; j < trace.t.size(); ++j) {
            if (!(trace.t[j] < T0)) break;
            const BlowupFloors f = blowup_rate_floor(T0, trace.t[j], p, mc);
            ok = trace.linf[j] >= f.linf && trace.h1semi[j] >= f.grad && (*lp)[j] >= f.lp;
            if (!ok) break;
        }
        if (ok) admitted.push_back(T0);
    }
    return admitted;
}

MajorantSamples volterra_majorant(double eps, double l2_u0, double linf_u0,
                                  const MeasuredConstants& mc, const TimeMesh& mesh) {
    if (!(eps > 0.0)) throw std::invalid_argument("volterra_majorant: eps must be positive");
    MajorantSamples ms;
    ms.t = mesh.t;
    ms.coupling = mc.c_a * mc.c_moll * std::pow(eps, -1.5) * l2_u0;
    const int m = mesh.intervals();
    ms.phi.assign(m + 1, 0.0);
    ms.log_phi.assign(m + 1, -kInfinity);
    if (!(linf_u0 > 0.0)) return ms;

    for (int j = 0; j <= m; ++j)
        ms.log_phi[j] = volterra_series_log(ms.coupling, linf_u0, mesh.t[j]);

    bool uniform = true;
    for (int j = 1; j < m; ++j)
        uniform = uniform && std::abs(mesh.dt(j) - mesh.dt(0)) <= 1e-12 * mesh.dt(0);
    const double zmax2 = ms.coupling * ms.coupling * M_PI * mesh.horizon();
    // the quadrature march divides by 1 - C w with w = (4/3) sqrt(dt) on the
    // last cell; keep it only while that denominator holds a 1/2 margin,
    // otherwise the series route is both stable and cheap
    const double wlast = m >= 1 ? (4.0 / 3.0) * std::sqrt(mesh.dt(0)) : 0.0;
    ms.series_route = !(uniform && m >= 1 && zmax2 < 600.0 && ms.coupling * wlast <= 0.5);
    if (ms.series_route) {
        for (int j = 0; j <= m; ++j) ms.phi[j] = std::exp(ms.log_phi[j]);
    } else {
        VolterraProblem prob;
        prob.C = ms.coupling;
        prob.D = linf_u0;
        prob.x_max = mesh.horizon();
        prob.M = m;
        ms.phi = volterra_solve(prob);
    }
    return ms;
}

LerayRun leray_solve(const VectorField& u0, double eps, const TimeMesh& mesh,
                     const MeasuredConstants& mc, const LerayOptions& opts) {
    const GridSpec& g = u0.grid;
    if (!(eps > 0.0) || !(eps < g.L / 4.0))
        throw std::invalid_argument("leray_solve: the mollifier scale must fit the cell, 0 < eps < L/4");

    SpectralVector u = to_spectral(u0);
    dealias(u);
    require_solenoidal(u, "leray_solve");

    const RArray& jm = mollifier_multiplier(g, eps);
    const double vol = g.L * g.L * g.L;
    const int m = mesh.intervals();

    LerayRun run;
    run.epsilon = eps;
    run.mesh = mesh;

    std::vector<double> cps = opts.checkpoints;
    std::sort(cps.begin(), cps.end());
    std::size_t next_cp = 0;

    NormReport r = norm_report(u);
    if (opts.majorant) run.majorant = volterra_majorant(eps, r.l2, r.linf, mc, mesh);

    const double e0 = r.l2 * r.l2;
    double diss2 = 0.0;

    FlowTrace& tr = run.trace;
    const auto push_node = [&](double t, const NormReport& nr, const SpectralScalar* ph) {
        tr.t.push_back(t);
        tr.l2.push_back(nr.l2);
        tr.h1semi.push_back(nr.h1semi);
        tr.linf.push_back(nr.linf);
        tr.l4.push_back(nr.l4);
        tr.l6.push_back(nr.l6);
        tr.dissipation_cum.push_back(diss2);
        const double defect = nr.l2 * nr.l2 - e0 + diss2;
        tr.energy_defect.push_back(e0 > 0.0 ? std::abs(defect) / e0 : 0.0);
        if (opts.pressure_trace) tr.pressure_l2.push_back(ph ? l2_norm(*ph) : 0.0);
    };
    const auto take_checkpoint = [&](double t) {
        while (next_cp < cps.size() && t >= cps[next_cp] - 1e-9 * (1.0 + std::abs(cps[next_cp]))) {
            run.checkpoint_times.push_back(t);
            run.checkpoints.push_back(u);
            ++next_cp;
        }
    };
    const auto mollified_forcing = [&](const SpectralVector& v, SpectralScalar* ph) {
        SpectralVector y(g);
        for (int c = 0; c < 3; ++c) y.c[c] = jm * v.c[c];
        return advective_forcing(y, v, ph);
    };
    const auto watch_tail = [&](const SpectralVector& v) {
        const double tail = spectral_tail_fraction(v);
        run.tail_max = std::max(run.tail_max, tail);
        if (tail > opts.tail_alarm) run.resolved = false;
    };

    SpectralScalar phat;
    SpectralVector f0 = mollified_forcing(u, opts.pressure_trace ? &phat : nullptr);
    push_node(mesh.t[0], r, &phat);
    watch_tail(u);
    take_checkpoint(mesh.t[0]);

    std::unique_ptr<StepKernel> kern;
    for (int j = 0; j < m; ++j) {
        const double dt = mesh.dt(j);
        if (!kern || std::abs(kern->dt() - dt) > 1e-15 * dt)
            kern = std::make_unique<StepKernel>(g, dt);

        // dealiased advection is energy-neutral: record how far the discrete
        // pairing strays from the exact cancellation <u, F(u)> = 0
        double pair = 0.0;
        for (int c = 0; c < 3; ++c) pair += (u.c[c] * f0.c[c].conjugate()).real().sum();
        const double scale = r.l2 * r.h1semi * r.linf;
        if (scale > 0.0)
            run.cancellation_max = std::max(run.cancellation_max, vol * std::abs(pair) / scale);

        const SpectralVector a = kern->predict(u, f0);
        const SpectralVector f1 = mollified_forcing(a, nullptr);
        const ModeStepSums s = kern->advance(u, f0, f1);
        diss2 += 2.0 * vol * s.diss_int;

        f0 = mollified_forcing(u, opts.pressure_trace ? &phat : nullptr);
        r = norm_report(u);
        push_node(mesh.t[j + 1], r, &phat);
        watch_tail(u);
        take_checkpoint(mesh.t[j + 1]);
    }
    run.final_u = std::move(u);
    return run;
}

double gronwall_separation_check(const Trajectory& u, const Trajectory& v) {
    if (u.grid.N != v.grid.N || u.grid.L != v.grid.L)
        throw std::invalid_argument("gronwall_separation_check: grids do not match");
    const std::size_t n = u.u.size();
    if (v.u.size() != n || n == 0)
        throw std::invalid_argument("gronwall_separation_check: trajectories do not share a mesh");
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(u.mesh.t[j] - v.mesh.t[j]) > 1e-12 * (1.0 + u.mesh.horizon()))
            throw std::invalid_argument("gronwall_separation_check: trajectories do not share a mesh");

    const double vol = u.grid.L * u.grid.L * u.grid.L;
    std::vector<double> sep2(n), expo(n, 0.0);
    std::vector<double> linf2(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += (u.u[j].c[c] - v.u[j].c[c]).abs2().sum();
        sep2[j] = vol * s;
        const double li = norm_report(u.u[j]).linf;
        linf2[j] = li * li;
    }
    for (std::size_t j = 1; j < n; ++j)
        expo[j] = expo[j - 1] +
                  0.25 * (linf2[j - 1] + linf2[j]) * (u.mesh.t[j] - u.mesh.t[j - 1]);

    double worst = 0.0;
    for (std::size_t j1 = 0; j1 < n; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
            if (sep2[j2] < 1e-30) continue;
            worst = std::max(worst, sep2[j2] / (sep2[j1] * std::exp(expo[j2] - expo[j1])));
        }
    return worst;
}

SmallnessReport smallness_global_check(const VectorField& u0, const MeasuredConstants& mc,
                                       double p) {
    if (!(p > 3.0)) throw std::invalid_argument("smallness_global_check: needs p > 3");
    if (!(mc.c_prime > 0.0))
        throw std::invalid_argument("smallness_global_check: constants carry no sup-norm measurement");
    const SpectralVector uh = to_spectral(u0);
    const double l2 = l2_norm(uh);
    const double grad = h1_seminorm(uh);
    const double m_inf = lp_norm(u0, kInfinity);
    const double mp = lp_norm(u0, p);

    SmallnessReport rep;
    rep.p = p;

    // the primary condition, straight from the min-kernel gate
    const double e1 = 1.0 / (256.0 * cube(mc.c_dprime));
    rep.linf = {l2 * l2 * m_inf, e1, l2 * l2 * m_inf < e1};

    // H1 data: by the guaranteed smoothing time the sup norm has dropped to
    // 8 pi c' c2^2 ||grad u0||^2 while the energy has not grown, so the
    // primary condition at that time reduces to this product
    const double c2 = mc.c_grad_heat;
    const double e2 = std::sqrt(e1 / (8.0 * M_PI * mc.c_prime * c2 * c2));
    rep.grad = {l2 * grad, e2, l2 * grad < e2};

    // Lp data, same reduction through the Lp horizon
    const double cp = heat_lp_constant(p);
    const double c3 = lp_horizon_constant(p, mc);
    const double e3 = std::pow(e1 / (2.0 * cp), p - 3.0) * cube(c3);
    const double v3 = std::pow(l2, 2.0 * (p - 3.0)) * std::pow(mp, p);
    rep.lp = {v3, e3, v3 < e3};
    return rep;
}

PressureRatios pressure_cubed_bound_check(const LerayRun& run) {
    const FlowTrace& tr = run.trace;
    if (tr.pressure_l2.empty())
        throw std::logic_error("pressure_cubed_bound_check: the run did not trace the pressure");
    PressureRatios pr;
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
        const double den = std::pow(tr.h1semi[j], 1.5) * std::sqrt(tr.l2[j]);
        if (!(den > 0.0)) continue;
        pr.pressure_max = std::max(pr.pressure_max, tr.pressure_l2[j] / den);
        pr.l4_max = std::max(pr.l4_max, tr.l4[j] * tr.l4[j] / den);
    }
    return pr;
}

PersistenceReport gradient_persistence_check(const Trajectory& traj, double t1, double t2,
                                             const MeasuredConstants& mc) {
    if (!(t1 < t2))
        throw std::invalid_argument("gradient_persistence_check: needs t1 < t2");
    if (!(mc.c_prime > 0.0))
        throw std::invalid_argument(
            "gradient_persistence_check: constants carry no sup-norm measurement");
    const int j1 = node_index(traj.mesh, t1, "gradient_persistence_check");
    const int j2 = node_index(traj.mesh, t2, "gradient_persistence_check");

    PersistenceReport rep;
    rep.gap = traj.mesh.t[j2] - traj.mesh.t[j1];
    rep.c_linf = 2.0 * mc.c_grad_heat;
    rep.c_grad = 2.0;

    const double grad1 = h1_seminorm(traj.u[j1]);
    if (!(grad1 > 0.0)) return rep;  // nothing to persist

    // window: the quarter-power majorant must be valid (the H1 horizon) and
    // the doubled-gradient supersolution must close
    const double w1 = 1.0 / (pow4(4.0 * M_PI * mc.c_prime * mc.c_grad_heat) * pow4(grad1));
    const double cw = 4.0 / std::sqrt(2.0 * M_E) * mc.c_grad_heat * std::beta(0.75, 0.5);
    const double w2 = 1.0 / pow4(cw * grad1);
    rep.window = std::min(w1, w2);
    if (rep.gap > rep.window) return rep;  // outside the guarantee: NotApplicable

    const double linf2 = norm_report(traj.u[j2]).linf;
    const double grad2 = h1_seminorm(traj.u[j2]);
    const double allowed_linf = rep.c_linf * grad1 * std::pow(rep.gap, -0.25);
    const double allowed_grad = rep.c_grad * grad1;
    rep.linf_ratio = linf2 / allowed_linf;
    rep.grad_ratio = grad2 / allowed_grad;
    rep.verdict = (rep.linf_ratio <= 1.0 + 1e-12 && rep.grad_ratio <= 1.0 + 1e-12)
                      ? Verdict::Pass
                      : Verdict::Fail;
    return rep;
}

}  // namespace nslab
