#pragma once

#include <functional>
#include <vector>

#include "nslab/norms.hpp"
#include "nslab/spectral_ops.hpp"
#include "nslab/time_mesh.hpp"

namespace nslab {

// A solenoidal trajectory on a time mesh: spectral velocity at every node,
// the energy ||u(t_j)||^2, and the running ledger. dissipation_cum[j] is
// int_0^{t_j} ||grad u||^2 ds and work_cum[j] is int_0^{t_j} <u, F> ds, both
// integrated in closed form per Fourier mode against the same piecewise-linear
// forcing the stepper saw, so the discrete energy balance
//   energy[j] - energy[0] + 2 dissipation_cum[j] - 2 work_cum[j] = 0
// holds to roundoff by construction. (For the self-advected solves in the
// flow module the true work vanishes, so work_cum there measures exactly how
// much the time discretization violates the energy equality.)
struct Trajectory {
    GridSpec grid;
    TimeMesh mesh;
    std::vector<SpectralVector> u;
    std::vector<ScalarField> p;  // filled only when requested
    std::vector<double> energy;
    std::vector<double> dissipation_cum;
    std::vector<double> work_cum;
};

struct StokesOptions {
    bool store_pressure = false;
};

// Heat semigroup e^{t Laplace} (identity at t = 0).
VectorField heat_evolve(const VectorField& u0, double t);
SpectralVector heat_evolve(const SpectralVector& u0, double t);

// Forced Stokes solve: u(t) = e^{t Laplace} u0 + Duhamel integral of the
// Leray-projected forcing, advanced per Fourier mode by the exact solution
// for piecewise-linear forcing (an exponential integrator, second order in
// the node sampling of F). u0 must be solenoidal; F is sampled at the nodes.
Trajectory stokes_solve_general(const VectorField& u0,
                                const std::function<VectorField(double)>& F,
                                const TimeMesh& mesh, const StokesOptions& opts = {});

// Same solve with the advective forcing F = -(Y.grad)Z, assembled in
// divergence form -d_k(Y_k Z_i) with dealiased products (the two forms
// coincide because Y is required to be solenoidal at every node).
Trajectory stokes_solve_advective(const VectorField& u0,
                                  const std::function<VectorField(double)>& Y,
                                  const std::function<VectorField(double)>& Z,
                                  const TimeMesh& mesh, const StokesOptions& opts = {});

// Pressure induced by a general forcing: p = -inv_laplacian(div F), the
// zero-mean potential with grad p = (I - P) F.
ScalarField stokes_pressure_general(const VectorField& F);

// Pressure induced by the advective forcing: p = sum_ik riesz_dd(Y_i Z_k),
// i.e. the zero-mean solution of -Laplace p = div div (Y x Z).
ScalarField stokes_pressure_advective(const VectorField& Y, const VectorField& Z);

// Worst relative defect of the energy balance over the nodes,
//   max_j |E_j - E_0 + 2 D_j - 2 W_j| / E_0.
double energy_dissipation_check(const Trajectory& traj);

// Exact step integrals accumulated over the modes (no volume factor; the
// caller multiplies by L^3 to convert Fourier sums to integrals).
struct ModeStepSums {
    double energy_int = 0.0;  // int |u|^2
    double work_int = 0.0;    // int Re <u, conj F>
    double diss_int = 0.0;    // int lam |u|^2
};

// Per-mode exponential step of fixed length: tabulates e^{-z}, psi1, psi2 and
// the step integrals once per (grid, dt). `predict` is the constant-forcing
// half step a = e^{-z} u + dt psi1 F0; `advance` is the exact update for
// piecewise-linear forcing between f0 and f1, with the step's energy,
// dissipation and work integrals accumulated on the side. The flow module
// reuses both as the Cox-Matthews pair (predictor forcing f1 = F(a)).
class StepKernel {
  public:
    StepKernel(const GridSpec& g, double dt);

    SpectralVector predict(const SpectralVector& u, const SpectralVector& f0) const;
    ModeStepSums advance(SpectralVector& u, const SpectralVector& f0,
                         const SpectralVector& f1) const;
    double dt() const { return dt_; }

  private:
    double dt_;
    const RArray* lam_;  // 4 pi^2 |xi|^2, cached per grid
    RArray ed_, p1_, p2_, e1_, e2_, e1p_;
};

// Sample validation + projection helpers shared with the flow module.
void require_solenoidal(const SpectralVector& u, const char* who);
SpectralVector project_forcing(const VectorField& F, const GridSpec& g);

// Advective forcing -(Y.grad)Z in divergence form, dealiased and projected.
SpectralVector advective_forcing(const VectorField& Y, const VectorField& Z);

// Spectral-input version used by the flow module's inner loops. Passing the
// same object for y and z cuts the nine products to six. When `pressure` is
// non-null it receives sum_ik riesz_dd(y_i z_k, i, k) -- the pressure induced
// by this forcing -- assembled from the products already in hand, so tracing
// the pressure norm costs no extra transforms.
SpectralVector advective_forcing(const SpectralVector& y, const SpectralVector& z,
                                 SpectralScalar* pressure = nullptr);

}  // namespace nslab
