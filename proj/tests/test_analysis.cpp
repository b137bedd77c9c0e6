#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nslab/analysis.hpp"
#include "nslab/time_mesh.hpp"

using namespace nslab;

namespace {

// phi = D + C int (x-s)^{-1/2} phi ds  =>  D e^{pi C^2 x} (1 + erf sqrt(pi C^2 x))
double abel_closed(double C, double D, double x) {
  double z = M_PI * C * C * x;
  return D * std::exp(z) * (1 + std::erf(std::sqrt(z)));
}

}  // namespace

TEST_CASE("Abel solver against the closed form") {
  // the solution leaves x = 0 with a sqrt slope, so the piecewise-linear
  // march carries an O(dx) layer at the first nodes; past the layer the
  // closed form is matched at the mesh's own accuracy, and the endpoint
  // error shrinks at first order under refinement
  VolterraProblem prob;
  prob.C = 1.0;
  prob.D = 1.0;
  prob.x_max = 1.0;
  prob.M = 1024;
  auto phi = volterra_solve(prob);
  REQUIRE(int(phi.size()) == prob.M + 1);
  CHECK(phi.front() == doctest::Approx(1.0).epsilon(1e-14));
  double worst = 0.0;
  for (int j = 0; j <= prob.M; ++j) {
    double x = prob.x_max * j / prob.M;
    if (x < 0.1) continue;
    worst = std::max(worst, std::abs(phi[j] - abel_closed(1, 1, x)) / abel_closed(1, 1, x));
  }
  CHECK(worst <= 1e-3);
  double e1 = std::abs(phi.back() - abel_closed(1, 1, 1));
  CHECK(phi.back() == doctest::Approx(45.999855).epsilon(2e-4));
  prob.M = 2048;
  double e2 = std::abs(volterra_solve(prob).back() - abel_closed(1, 1, 1));
  // the layer contributes between first and 3/2 order at the endpoint
  CHECK(e1 / e2 > 1.7);
  CHECK(e1 / e2 < 4.0);

  // a different coupling, same identity
  prob.C = 0.6;
  prob.D = 2.0;
  prob.M = 1024;
  auto phi2 = volterra_solve(prob);
  CHECK(phi2.back() == doctest::Approx(abel_closed(0.6, 2.0, 1.0)).epsilon(1e-4));
}

TEST_CASE("resolvent series, log route, and successive approximations") {
  double ref = abel_closed(1, 1, 0.7);
  CHECK(volterra_series(1, 1, 0.7, 200) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(volterra_series_log(1, 1, 0.7) == doctest::Approx(std::log(ref)).epsilon(1e-10));

  // far beyond double overflow the log stays pinned to pi C^2 x + log(2D)
  double lp = volterra_series_log(50.0, 1.0, 1.0);
  double z = M_PI * 2500.0;
  CHECK(lp > z);
  CHECK(lp < z + std::log(2.0) + 1e-6);

  VolterraProblem prob;
  prob.C = 1.0;
  prob.D = 1.0;
  prob.x_max = 0.5;
  prob.M = 256;
  auto exact = volterra_solve(prob);
  auto few = volterra_successive(prob, 3);
  auto more = volterra_successive(prob, 12);
  // iterates increase monotonically toward the solution
  CHECK(few.back() < more.back());
  CHECK(more.back() <= exact.back() * (1 + 1e-9));
  CHECK(more.back() == doctest::Approx(exact.back()).epsilon(5e-3));
}

TEST_CASE("quadratic comparison: pass, and hypothesis failure is not a failure") {
  TimeMesh mesh = TimeMesh::uniform(1.0, 64);
  int n = int(mesh.t.size());
  PowerKernel ker{0.01, 0.5};

  // f, phi constant; a, b chosen so both inequalities hold with slack
  std::vector<double> f(n, 0.1), phi(n, 1.0), a(n), b(n);
  for (int j = 0; j < n; ++j) {
    double st = std::sqrt(mesh.t[j]);
    a[j] = 0.1;                          // f = 0.1 <= 0.1 + K f^2
    b[j] = 1.0 - 0.01 * 2 * st * 1.1;    // phi = 1 >= b + K phi^2 (K 1 = 0.02 sqrt t)
  }
  InequalityProblem prob{mesh, ker, a, b, f, phi};
  MarginProfile res = quadratic_compare(prob);
  CHECK(res.verdict == Verdict::Pass);
  CHECK(res.min_margin == doctest::Approx(0.9).epsilon(0.01));
  CHECK(int(res.margin.size()) == n);

  // violate a <= b: conditional lemma, so the verdict is NotApplicable
  std::vector<double> a_big(n, 2.0), f_big(n, 1.5);
  InequalityProblem bad{mesh, ker, a_big, b, f_big, phi};
  MarginProfile res2 = quadratic_compare(bad);
  CHECK(res2.verdict == Verdict::NotApplicable);
}

TEST_CASE("supersolution margin changes sign exactly at the smoothing horizon") {
  // phi = 2 c2 G t^{-1/4} against b = c2 G t^{-1/4} and kernel c' tau^{-1/2}:
  // the Beta(1/2,1/2) integral makes the margin vanish at t = (4 pi c' c2 G)^{-4}
  double cp = 1.0, c2 = 1.0, G = 1.0;
  double t2 = std::pow(4 * M_PI * cp * c2 * G, -4.0);
  PowerKernel ker{cp, 0.5};
  auto phi = majorant_quarter(2 * c2 * G);
  auto b = [&](double t) { return c2 * G * std::pow(t, -0.25); };

  // keep clear of the boundary: the piecewise-linear interpolation of t^{-1/4}
  // near 0 biases the quadrature by a few percent of the kernel integral
  TimeMesh inside = TimeMesh::uniform(0.7 * t2, 32);
  CHECK(supersolution_verify(phi, ker, b, inside) >= 0.0);
  TimeMesh outside = TimeMesh::uniform(3.0 * t2, 32);
  CHECK(supersolution_verify(phi, ker, b, outside) < 0.0);
}

TEST_CASE("linear comparison marches a Gronwall bound") {
  TimeMesh mesh = TimeMesh::uniform(1.0, 512);
  int n = int(mesh.t.size());
  double c = 0.8;
  PowerKernel flat{c, 0.0};  // kernel c tau^0: plain Gronwall
  std::vector<double> h(n, 1.0), a(n), b(n), f(n);
  for (int j = 0; j < n; ++j) {
    a[j] = b[j] = 1.0;
    f[j] = std::exp(c * mesh.t[j]) * (1 - 1e-3);  // slightly under the equality solution
  }
  MarginProfile res = linear_compare(f, flat, h, a, b, mesh, 1e-6);
  CHECK(res.verdict == Verdict::Pass);
  // the marched phi should track b e^{ct}; margin stays small but nonnegative
  CHECK(res.min_margin >= 0.0);
  CHECK(res.min_margin <= 0.01 * std::exp(c));
}

TEST_CASE("min-kernel gate: pass, gate failure, and a forced conclusion failure") {
  TimeMesh mesh = TimeMesh::uniform(1.0, 64);
  int n = int(mesh.t.size());
  PowerKernel gker{1e-3, 0.5}, hker{1.0, 2.0};
  // f == a so the hypothesis holds at every node with the kernel term as slack
  std::vector<double> f(n, 1.0), a(n, 1.0), b(n, 1.0);

  MarginProfile ok = min_kernel_compare(f, gker, hker, a, b, 2.0, mesh);
  CHECK(ok.verdict == Verdict::Pass);
  CHECK(ok.min_margin > 0.9);

  // C* too small for the gate: conditional again
  MarginProfile na = min_kernel_compare(f, gker, hker, a, b, 1.0, mesh);
  CHECK(na.verdict == Verdict::NotApplicable);

  // lie about the hypothesis with a huge tolerance: the conclusion check
  // still catches f > C*
  std::vector<double> f_big(n, 2.5);
  MarginProfile fail = min_kernel_compare(f_big, gker, hker, a, b, 2.0, mesh, 10.0);
  CHECK(fail.verdict == Verdict::Fail);
}

TEST_CASE("majorant shapes") {
  CHECK(majorant_constant(3.0)(0.42) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(majorant_quarter(2.0)(16.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(majorant_lp(5.0, 6.0)(4.0) == doctest::Approx(5.0 * std::pow(4.0, -0.25)).epsilon(1e-13));
  CHECK(std::string(verdict_name(Verdict::Pass)) == "pass");
  CHECK(std::string(verdict_name(Verdict::NotApplicable)) == "not_applicable");
}
