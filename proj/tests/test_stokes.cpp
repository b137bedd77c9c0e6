#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nslab/norms.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/spectral_ops.hpp"
#include "nslab/stokes.hpp"
#include "nslab/time_mesh.hpp"

using namespace nslab;

namespace {

// solenoidal single mode u = e_x cos(2 pi m z / L)
VectorField single_mode(const GridSpec& g, int m) {
  VectorField u(g);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j)
      for (int k = 0; k < g.N; ++k)
        u.v[0][g.flat(i, j, k)] = std::cos(2 * M_PI * m * g.coord(k) / g.L);
  return u;
}

double field_distance(const SpectralVector& a, const SpectralVector& b) {
  double d = 0.0;
  for (int c = 0; c < 3; ++c) d = std::max(d, (a.c[c] - b.c[c]).abs().maxCoeff());
  return d;
}

}  // namespace

TEST_CASE("exponential integrator tables and exact step integrals") {
  CHECK(psi1(2.0) == doctest::Approx((1 - std::exp(-2.0)) / 2).epsilon(1e-14));
  CHECK(psi2(2.0) == doctest::Approx((2 - 1 + std::exp(-2.0)) / 4).epsilon(1e-14));
  CHECK(psi1(1e-9) == doctest::Approx(1.0 - 0.5e-9).epsilon(1e-13));
  CHECK(psi2(1e-9) == doctest::Approx(0.5 - 1e-9 / 6).epsilon(1e-13));

  double lam = 1.7, dt = 0.3;
  EnergyInts e = energy_ints(lam, dt);
  CHECK(e.e1 == doctest::Approx((1 - std::exp(-lam * dt)) / lam).epsilon(1e-14));
  CHECK(e.e2 == doctest::Approx((1 - std::exp(-2 * lam * dt)) / (2 * lam)).epsilon(1e-14));
  CHECK(e.e1p ==
        doctest::Approx((1 - (1 + lam * dt) * std::exp(-lam * dt)) / (lam * lam)).epsilon(1e-14));
  EnergyInts z = energy_ints(0.0, dt);
  CHECK(z.e1 == doctest::Approx(dt).epsilon(1e-15));
  CHECK(z.e2 == doctest::Approx(dt).epsilon(1e-15));
  CHECK(z.e1p == doctest::Approx(dt * dt / 2).epsilon(1e-15));
}

TEST_CASE("product-integration weights are exact on piecewise-linear data") {
  TimeMesh mesh = TimeMesh::uniform(1.0, 7);
  int j = mesh.intervals();
  auto w = duhamel_weights(mesh, j, 0.5);
  REQUIRE(int(w.size()) == j + 1);
  double acc = 0.0;
  for (int i = 0; i <= j; ++i) acc += w[i] * mesh.t[i];
  // int_0^1 s (1-s)^{-1/2} ds = 4/3
  CHECK(acc == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  auto w0 = duhamel_weights(mesh, j, 0.0);
  double mass = 0.0, first = 0.0;
  for (int i = 0; i <= j; ++i) {
    mass += w0[i];
    first += w0[i] * mesh.t[i];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(first == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("zero forcing reduces to the heat flow") {
  GridSpec g{1.0, 16};
  VectorField u0 = random_solenoidal(g, 4, 3.0, 1.0, 2.0);
  TimeMesh mesh = TimeMesh::uniform(0.2, 8);
  auto traj = stokes_solve_general(u0, [&](double) { return VectorField(g); }, mesh);
  SpectralVector expect = heat_evolve(to_spectral(u0), mesh.horizon());
  CHECK(field_distance(traj.u.back(), expect) <= 1e-12);
  CHECK(energy_dissipation_check(traj) <= 1e-12);
}

TEST_CASE("steady single-mode forcing matches the closed form") {
  GridSpec g{1.0, 16};
  VectorField f = single_mode(g, 2);
  TimeMesh mesh = TimeMesh::uniform(0.5, 12);
  auto traj = stokes_solve_general(VectorField(g), [&](double) { return f; }, mesh);
  double lam = 4 * M_PI * M_PI * 4.0;  // |k| = 2, L = 1
  double amp = (1 - std::exp(-lam * mesh.horizon())) / lam;
  SpectralVector expect = to_spectral(f);
  for (int c = 0; c < 3; ++c) expect.c[c] *= amp;
  CHECK(field_distance(traj.u.back(), expect) <= 1e-10 * amp);
}

TEST_CASE("oscillating forcing: closed form and second-order defect decay") {
  GridSpec g{1.0, 16};
  VectorField f = single_mode(g, 1);
  double lam = 4 * M_PI * M_PI, om = 3.0, T = 0.5;
  auto exact_amp = [&](double t) {
    return (lam * std::cos(om * t) + om * std::sin(om * t) - lam * std::exp(-lam * t)) /
           (lam * lam + om * om);
  };
  auto run = [&](int M) {
    TimeMesh mesh = TimeMesh::uniform(T, M);
    auto traj = stokes_solve_general(
        VectorField(g),
        [&](double t) {
          VectorField ft = f;
          for (int c = 0; c < 3; ++c) ft.v[c] *= std::cos(om * t);
          return ft;
        },
        mesh);
    SpectralVector expect = to_spectral(f);
    for (int c = 0; c < 3; ++c) expect.c[c] *= exact_amp(T);
    return field_distance(traj.u.back(), expect);
  };
  double e8 = run(8), e16 = run(16), e32 = run(32);
  CHECK(e16 < e8);
  CHECK(e8 / e16 >= 3.5);  // one step-halving of a second-order scheme
  CHECK(e16 / e32 >= 3.7);
  CHECK(run(64) <= 2e-7);
}

TEST_CASE("energy ledger balances to roundoff under forcing") {
  GridSpec g{1.0, 16};
  VectorField u0 = random_solenoidal(g, 9, 3.0, 1.0, 2.0);
  VectorField f = random_solenoidal(g, 10, 2.0, 0.7, 2.0);
  TimeMesh mesh = TimeMesh::uniform(0.3, 9);
  auto traj = stokes_solve_general(u0, [&](double) { return f; }, mesh);
  CHECK(energy_dissipation_check(traj) <= 1e-12);
  REQUIRE(traj.u.size() == traj.mesh.t.size());
  // the ledger's energy column is the Plancherel energy of the stored nodes
  for (std::size_t j = 0; j < traj.u.size(); j += 3) {
    double e = l2_norm(traj.u[j]);
    CHECK(traj.energy[j] == doctest::Approx(e * e).epsilon(1e-11));
  }
  // forcing aligned with the state pumps energy in
  auto pumped = stokes_solve_general(u0, [&](double) { return u0; }, mesh);
  CHECK(pumped.work_cum.back() > 0.0);
  CHECK(pumped.energy.back() > traj.energy.back());
}

TEST_CASE("advective assembly: divergence form equals convective form") {
  GridSpec g{1.0, 16};
  VectorField Y = random_solenoidal(g, 21, 3.0, 1.0, 2.0);
  VectorField Z = random_solenoidal(g, 22, 3.0, 1.0, 2.0);
  SpectralVector ys = to_spectral(Y), zs = to_spectral(Z);

  SpectralVector div_form = advective_forcing(Y, Z);

  // -(Y . grad) Z assembled mode-exactly, then projected
  SpectralVector conv(g);
  for (int i = 0; i < 3; ++i) {
    CArray acc = CArray::Zero(g.size());
    for (int k = 0; k < 3; ++k) {
      SpectralScalar yk(g), zi(g);
      yk.c = ys.c[k];
      zi.c = zs.c[i];
      acc += multiply_dealias(yk, derivative(zi, k)).c;
    }
    conv.c[i] = -acc;
  }
  leray_project(conv);

  CHECK(field_distance(div_form, conv) <= 1e-11);
}

TEST_CASE("advective overloads and pressure conventions agree") {
  GridSpec g{1.0, 16};
  VectorField Y = random_solenoidal(g, 31, 3.0, 1.0, 2.0);
  VectorField Z = random_solenoidal(g, 32, 3.0, 0.8, 2.0);
  SpectralVector ys = to_spectral(Y), zs = to_spectral(Z);

  SpectralVector from_phys = advective_forcing(Y, Z);
  SpectralScalar p_out(g);
  SpectralVector from_spec = advective_forcing(ys, zs, &p_out);
  CHECK(field_distance(from_phys, from_spec) <= 1e-12);

  ScalarField p_direct = stokes_pressure_advective(Y, Z);
  CHECK((to_spectral(p_direct).c - p_out.c).abs().maxCoeff() <= 1e-12);

  // the unprojected divergence-form forcing reproduces the same potential
  SpectralVector raw(g);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      SpectralScalar yk(g), zi(g);
      yk.c = ys.c[k];
      zi.c = zs.c[i];
      raw.c[i] -= derivative(multiply_dealias(yk, zi), k).c;
    }
  ScalarField p_general = stokes_pressure_general(to_physical(raw));
  CHECK((to_spectral(p_general).c - p_out.c).abs().maxCoeff() <= 1e-12);

  // -Lap p = div div (Y x Z): compare symbols directly
  SpectralScalar rhs(g);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      SpectralScalar yi(g), zk(g);
      yi.c = ys.c[i];
      zk.c = zs.c[k];
      rhs.c += derivative(derivative(multiply_dealias(yi, zk), i), k).c;
    }
  CArray lhs = p_out.c * laplacian_symbol(g);
  CHECK((lhs - rhs.c).abs().maxCoeff() <= 1e-11);
}

TEST_CASE("advective and general routes produce the same trajectory") {
  GridSpec g{1.0, 16};
  VectorField u0 = random_solenoidal(g, 41, 3.0, 0.5, 2.0);
  VectorField v = random_solenoidal(g, 42, 2.0, 0.5, 2.0);
  TimeMesh mesh = TimeMesh::uniform(0.2, 6);

  auto via_advective = stokes_solve_advective(
      u0, [&](double) { return v; }, [&](double) { return v; }, mesh);
  auto via_general = stokes_solve_general(
      u0, [&](double) { return to_physical(advective_forcing(v, v)); }, mesh);
  CHECK(field_distance(via_advective.u.back(), via_general.u.back()) <= 1e-10);
}

TEST_CASE("advective solve stores the pressure when asked") {
  GridSpec g{1.0, 16};
  VectorField u0 = random_solenoidal(g, 51, 3.0, 0.5, 2.0);
  VectorField v = random_solenoidal(g, 52, 2.0, 0.5, 2.0);
  TimeMesh mesh = TimeMesh::uniform(0.1, 4);
  StokesOptions opts;
  opts.store_pressure = true;
  auto traj = stokes_solve_advective(
      u0, [&](double) { return v; }, [&](double) { return v; }, mesh, opts);
  REQUIRE(traj.p.size() == traj.mesh.t.size());
  ScalarField direct = stokes_pressure_advective(v, v);
  CHECK((traj.p[2].v - direct.v).abs().maxCoeff() <= 1e-11);
}

TEST_CASE("non-solenoidal advecting field is rejected") {
  GridSpec g{1.0, 16};
  VectorField bad(g);
  bad.v[0] = random_scalar(g, 61, 3.0).v;  // gradient content, not projected
  VectorField u0 = random_solenoidal(g, 62, 3.0, 0.5, 2.0);
  TimeMesh mesh = TimeMesh::uniform(0.1, 2);
  CHECK_THROWS(stokes_solve_advective(
      u0, [&](double) { return bad; }, [&](double) { return bad; }, mesh));
}
