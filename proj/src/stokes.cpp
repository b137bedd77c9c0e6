#include "nslab/stokes.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace nslab {

namespace {

ScalarField component(const VectorField& f, int c) {
    ScalarField s(f.grid);
    s.v = f.v[c];
    return s;
}

}  // namespace

VectorField heat_evolve(const VectorField& u0, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_evolve: t < 0");
    SpectralVector s = to_spectral(u0);
    heat_multiply(s, t);
    return to_physical(s);
}

SpectralVector heat_evolve(const SpectralVector& u0, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_evolve: t < 0");
    SpectralVector s = u0;
    heat_multiply(s, t);
    return s;
}

void require_solenoidal(const SpectralVector& u, const char* who) {
    const double div = l2_norm(divergence(u));
    const double scale = h1_seminorm(u);
    if (div > 1e-8 * scale + 1e-13)
        throw std::invalid_argument(std::string(who) + ": field is not divergence free");
}

SpectralVector project_forcing(const VectorField& F, const GridSpec& g) {
    if (F.grid.N != g.N || F.grid.L != g.L)
        throw std::invalid_argument("forcing grid does not match the solve grid");
    SpectralVector s = to_spectral(F);
    leray_project(s);
    return s;
}

SpectralVector advective_forcing(const VectorField& Y, const VectorField& Z) {
    const GridSpec& g = Y.grid;
    std::array<SpectralScalar, 3> y, z;
    for (int c = 0; c < 3; ++c) {
        y[c] = to_spectral(component(Y, c));
        z[c] = to_spectral(component(Z, c));
    }
    SpectralVector f(g);
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            SpectralScalar prod = multiply_dealias(y[k], z[i]);
            SpectralScalar dk = derivative(prod, k);
            f.c[i] -= dk.c;
        }
    }
    leray_project(f);
    return f;
}

SpectralVector advective_forcing(const SpectralVector& y, const SpectralVector& z,
                                 SpectralScalar* pressure) {
    const GridSpec& g = y.grid;
    if (z.grid.N != g.N || z.grid.L != g.L)
        throw std::invalid_argument("advective_forcing: grids do not match");
    const bool same = (&y == &z);

    // one dealias + inverse transform per distinct component
    std::array<ScalarField, 3> yp, zp;
    for (int c = 0; c < 3; ++c) {
        SpectralScalar s(g);
        s.c = y.c[c];
        dealias(s);
        yp[c] = to_physical(s);
    }
    if (!same) {
        for (int c = 0; c < 3; ++c) {
            SpectralScalar s(g);
            s.c = z.c[c];
            dealias(s);
            zp[c] = to_physical(s);
        }
    }
    const std::array<ScalarField, 3>& zr = same ? yp : zp;

    // products y_a z_b, re-truncated; y == z makes them symmetric in (a, b)
    std::array<std::array<SpectralScalar, 3>, 3> prod;
    ScalarField work(g);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (same && a > b) {
                prod[a][b] = prod[b][a];
                continue;
            }
            work.v = yp[a].v * zr[b].v;
            prod[a][b] = to_spectral(work);
            dealias(prod[a][b]);
        }
    }

    SpectralVector f(g);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            f.c[i] -= derivative(prod[k][i], k).c;
    leray_project(f);

    if (pressure) {
        SpectralScalar p(g);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                p.c += riesz_dd(prod[i][k], i, k).c;
        *pressure = std::move(p);
    }
    return f;
}

StepKernel::StepKernel(const GridSpec& g, double dt)
    : dt_(dt), lam_(&laplacian_symbol(g)) {
    if (!(dt > 0.0)) throw std::invalid_argument("StepKernel: dt must be positive");
    const auto n = lam_->size();
    ed_.resize(n);
    p1_.resize(n);
    p2_.resize(n);
    e1_.resize(n);
    e2_.resize(n);
    e1p_.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        const double z = (*lam_)[m] * dt;
        ed_[m] = std::exp(-z);
        p1_[m] = psi1(z);
        p2_[m] = psi2(z);
        const EnergyInts e = energy_ints((*lam_)[m], dt);
        e1_[m] = e.e1;
        e2_[m] = e.e2;
        e1p_[m] = e.e1p;
    }
}

SpectralVector StepKernel::predict(const SpectralVector& u, const SpectralVector& f0) const {
    SpectralVector a(u.grid);
    for (int c = 0; c < 3; ++c)
        a.c[c] = ed_ * u.c[c] + dt_ * p1_ * f0.c[c];
    return a;
}

ModeStepSums StepKernel::advance(SpectralVector& u, const SpectralVector& f0,
                                 const SpectralVector& f1) const {
    ModeStepSums sums;
    const double dt = dt_;
    const double dt2 = dt * dt, dt3 = dt2 * dt;
    // 3-point Gauss-Legendre on [0, dt]: exact through quartics, used for the
    // (near-)undamped modes where the exponential decomposition degenerates
    const double off = 0.5 * dt * std::sqrt(3.0 / 5.0);
    const double tau[3] = {0.5 * dt - off, 0.5 * dt, 0.5 * dt + off};
    const double gw[3] = {dt * 5.0 / 18.0, dt * 8.0 / 18.0, dt * 5.0 / 18.0};

    const auto n = lam_->size();
    for (Eigen::Index m = 0; m < n; ++m) {
        const double lam = (*lam_)[m];
        const double z = lam * dt;
        for (int c = 0; c < 3; ++c) {
            const Cplx u0 = u.c[c][m];
            const Cplx F0 = f0.c[c][m];
            const Cplx F1 = f1.c[c][m];
            const Cplx gam = (F1 - F0) / dt;
            // exact update for piecewise-linear forcing
            u.c[c][m] = ed_[m] * u0 + dt * (p1_[m] * F0 + p2_[m] * (F1 - F0));

            double emode;
            if (z < 1e-7) {
                // u(tau) = u0 + F0 tau + gam tau^2/2 to O(z^2); quadrature
                double work = 0.0;
                emode = 0.0;
                for (int q = 0; q < 3; ++q) {
                    const Cplx uq = u0 + F0 * tau[q] + 0.5 * gam * tau[q] * tau[q];
                    const Cplx fq = F0 + gam * tau[q];
                    emode += gw[q] * std::norm(uq);
                    work += gw[q] * (uq * std::conj(fq)).real();
                }
                sums.work_int += work;
            } else {
                // u(tau) = A e^{-lam tau} + B + C tau
                const Cplx C = gam / lam;
                const Cplx B = (F0 - C) / lam;
                const Cplx A = u0 - B;
                emode = std::norm(A) * e2_[m] + std::norm(B) * dt + std::norm(C) * dt3 / 3.0 +
                        2.0 * (A * std::conj(B)).real() * e1_[m] +
                        2.0 * (A * std::conj(C)).real() * e1p_[m] +
                        (B * std::conj(C)).real() * dt2;
                const Cplx i0 = A * e1_[m] + B * dt + C * dt2 / 2.0;
                const Cplx i1 = A * e1p_[m] + B * dt2 / 2.0 + C * dt3 / 3.0;
                sums.work_int += (std::conj(F0) * i0 + std::conj(gam) * i1).real();
            }
            sums.energy_int += emode;
            sums.diss_int += lam * emode;
        }
    }
    return sums;
}

namespace {

// Common march: forcing and (optionally) pressure are sampled per node.
Trajectory solve_impl(const VectorField& u0, const TimeMesh& mesh, const StokesOptions& opts,
                      const std::function<SpectralVector(double)>& forcing_at,
                      const std::function<ScalarField(double)>& pressure_at) {
    const GridSpec& g = u0.grid;
    const int M = mesh.intervals();
    const double vol = g.L * g.L * g.L;

    SpectralVector u = to_spectral(u0);
    require_solenoidal(u, "stokes solve: initial data");

    Trajectory traj;
    traj.grid = g;
    traj.mesh = mesh;
    traj.u.reserve(M + 1);
    traj.energy.reserve(M + 1);
    traj.dissipation_cum.reserve(M + 1);
    traj.work_cum.reserve(M + 1);

    traj.u.push_back(u);
    traj.energy.push_back(vol * (u.c[0].abs2().sum() + u.c[1].abs2().sum() + u.c[2].abs2().sum()));
    traj.dissipation_cum.push_back(0.0);
    traj.work_cum.push_back(0.0);
    if (opts.store_pressure) traj.p.push_back(pressure_at(mesh.t[0]));

    SpectralVector f0 = forcing_at(mesh.t[0]);
    double diss = 0.0, work = 0.0;
    std::unique_ptr<StepKernel> kern;
    for (int j = 0; j < M; ++j) {
        const double dt = mesh.dt(j);
        if (!kern || std::abs(kern->dt() - dt) > 1e-15 * dt)
            kern = std::make_unique<StepKernel>(g, dt);
        SpectralVector f1 = forcing_at(mesh.t[j + 1]);
        const ModeStepSums s = kern->advance(u, f0, f1);
        diss += vol * s.diss_int;
        work += vol * s.work_int;
        traj.u.push_back(u);
        traj.energy.push_back(vol *
                              (u.c[0].abs2().sum() + u.c[1].abs2().sum() + u.c[2].abs2().sum()));
        traj.dissipation_cum.push_back(diss);
        traj.work_cum.push_back(work);
        if (opts.store_pressure) traj.p.push_back(pressure_at(mesh.t[j + 1]));
        f0 = std::move(f1);
    }
    return traj;
}

}  // namespace

Trajectory stokes_solve_general(const VectorField& u0,
                                const std::function<VectorField(double)>& F,
                                const TimeMesh& mesh, const StokesOptions& opts) {
    return solve_impl(
        u0, mesh, opts,
        [&](double t) { return project_forcing(F(t), u0.grid); },
        [&](double t) { return stokes_pressure_general(F(t)); });
}

Trajectory stokes_solve_advective(const VectorField& u0,
                                  const std::function<VectorField(double)>& Y,
                                  const std::function<VectorField(double)>& Z,
                                  const TimeMesh& mesh, const StokesOptions& opts) {
    return solve_impl(
        u0, mesh, opts,
        [&](double t) {
            VectorField y = Y(t);
            require_solenoidal(to_spectral(y), "stokes advective solve: Y");
            return advective_forcing(y, Z(t));
        },
        [&](double t) { return stokes_pressure_advective(Y(t), Z(t)); });
}

ScalarField stokes_pressure_general(const VectorField& F) {
    SpectralScalar d = divergence(to_spectral(F));
    SpectralScalar p = inv_laplacian(d);
    p.c = -p.c;
    return to_physical(p);
}

ScalarField stokes_pressure_advective(const VectorField& Y, const VectorField& Z) {
    const GridSpec& g = Y.grid;
    std::array<SpectralScalar, 3> y, z;
    for (int c = 0; c < 3; ++c) {
        y[c] = to_spectral(component(Y, c));
        z[c] = to_spectral(component(Z, c));
    }
    SpectralScalar p(g);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            SpectralScalar term = riesz_dd(multiply_dealias(y[i], z[k]), i, k);
            p.c += term.c;
        }
    return to_physical(p);
}

double energy_dissipation_check(const Trajectory& traj) {
    const double e0 = traj.energy.empty() ? 0.0 : traj.energy.front();
    double scale = e0;
    for (double e : traj.energy) scale = std::max(scale, e);
    if (scale <= 0.0) return 0.0;
    const double denom = (e0 > 0.0) ? e0 : scale;
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.energy.size(); ++j) {
        const double defect = traj.energy[j] - e0 + 2.0 * traj.dissipation_cum[j] -
                              2.0 * traj.work_cum[j];
        worst = std::max(worst, std::abs(defect) / denom);
    }
    return worst;
}

}  // namespace nslab
