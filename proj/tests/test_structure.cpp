// Structure of the solution set: interval bookkeeping, the mollification
// ladder, singular-time detection with its sqrt-length budget, box-counting
// dimension, tail-energy separation, and late-time decay.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nslab/norms.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/structure.hpp"

using namespace nslab;

namespace {

constexpr std::uint64_t kSeed = 0x5eedULL;

GridSpec grid16() { return GridSpec{1.0, 16}; }

const MeasuredConstants& mc_batch() {
  static MeasuredConstants mc = measure_constants(grid16(), 8, 0.25, kSeed, 6);
  return mc;
}

const MeasuredConstants& mc_kernel() {
  static MeasuredConstants mc = measure_constants(grid16(), 8, 0.25, kSeed, 0);
  return mc;
}

// one shared three-rung ladder (the solves dominate this binary's runtime)
const SweepResult& shared_sweep() {
  static SweepResult sw = [] {
    GridSpec g = grid16();
    VectorField u0 = random_solenoidal(g, 9, 2.0, 0.4, kInfinity);
    TimeMesh mesh = TimeMesh::uniform(0.2, 8);
    SweepOptions opts;
    opts.checkpoints = {0.1, 0.2};
    return eps_sweep(u0, {0.2, 0.1, 0.05}, mesh, mc_kernel(), opts);
  }();
  return sw;
}

}  // namespace

TEST_CASE("interval sets: ordering, overlap rejection, complement round-trip") {
  IntervalSet s = make_interval_set(1.0, {{0.5, 0.7}, {0.1, 0.2}});
  REQUIRE(s.intervals.size() == 2);
  CHECK(s.intervals[0].first == 0.1);  // sorted
  CHECK(s.total_length() == doctest::Approx(0.3).epsilon(1e-15));

  CHECK_THROWS_AS(make_interval_set(1.0, {{0.1, 0.5}, {0.4, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(make_interval_set(1.0, {{0.3, 0.3}}), std::invalid_argument);
  CHECK_THROWS_AS(make_interval_set(0.0, {}), std::invalid_argument);

  IntervalSet c = complement(s);
  REQUIRE(c.intervals.size() == 3);
  CHECK(c.intervals[0] == std::make_pair(0.0, 0.1));
  CHECK(c.intervals[1] == std::make_pair(0.2, 0.5));
  CHECK(c.intervals[2] == std::make_pair(0.7, 1.0));
  CHECK(c.total_length() == doctest::Approx(0.7).epsilon(1e-15));

  IntervalSet back = complement(c);
  REQUIRE(back.intervals.size() == s.intervals.size());
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    CHECK(back.intervals[i].first == doctest::Approx(s.intervals[i].first).epsilon(1e-14));
    CHECK(back.intervals[i].second == doctest::Approx(s.intervals[i].second).epsilon(1e-14));
  }

  // empty set and unbounded tail
  IntervalSet empty = make_interval_set(2.0, {});
  IntervalSet full = complement(empty);
  REQUIRE(full.intervals.size() == 1);
  CHECK(full.intervals[0] == std::make_pair(0.0, 2.0));
  CHECK(complement(full).intervals.empty());

  IntervalSet inf_tail = make_interval_set(1.0, {{0.5, kInfinity}});
  CHECK(inf_tail.total_length() == doctest::Approx(0.5).epsilon(1e-15));
  IntervalSet ci = complement(inf_tail);
  REQUIRE(ci.intervals.size() == 1);
  CHECK(ci.intervals[0] == std::make_pair(0.0, 0.5));

  // clipping past the horizon
  IntervalSet over = make_interval_set(1.0, {{0.8, 1.5}});
  CHECK(over.total_length() == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("mollification ladder: shapes, symmetry, determinism, validation") {
  const SweepResult& sw = shared_sweep();

  CHECK(sw.resolved);
  REQUIRE(sw.eps.size() == 3);
  REQUIRE(sw.traces.size() == 3);
  for (const FlowTrace& tr : sw.traces) CHECK(tr.t.size() == 9);
  REQUIRE(sw.checkpoint_times.size() == 2);
  CHECK(sw.checkpoint_times[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(sw.checkpoint_times[1] == doctest::Approx(0.2).epsilon(1e-12));
  REQUIRE(sw.checkpoints.size() == 3);
  for (const auto& rung : sw.checkpoints) CHECK(rung.size() == 2);

  REQUIRE(sw.pairwise.size() == 2);
  for (const auto& mat : sw.pairwise) {
    REQUIRE(mat.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(mat[i][i] == 0.0);
      for (std::size_t j = i + 1; j < 3; ++j) {
        CHECK(mat[i][j] == mat[j][i]);
        CHECK(mat[i][j] > 0.0);
      }
    }
  }

  // the whole pipeline is seeded: a second sweep is bit-identical
  GridSpec g = grid16();
  VectorField u0 = random_solenoidal(g, 9, 2.0, 0.4, kInfinity);
  TimeMesh mesh = TimeMesh::uniform(0.2, 8);
  SweepOptions opts;
  opts.checkpoints = {0.1, 0.2};
  SweepResult sw2 = eps_sweep(u0, {0.2, 0.1, 0.05}, mesh, mc_kernel(), opts);
  CHECK(sw2.pairwise[0][0][1] == sw.pairwise[0][0][1]);
  CHECK(sw2.pairwise[1][1][2] == sw.pairwise[1][1][2]);
  CHECK(sw2.traces[2].l2.back() == sw.traces[2].l2.back());

  CHECK_THROWS_AS(eps_sweep(u0, {}, mesh, mc_kernel()), std::invalid_argument);
  CHECK_THROWS_AS(eps_sweep(u0, {0.1, 0.1}, mesh, mc_kernel()), std::invalid_argument);
  SweepOptions far;
  far.checkpoints = {0.5};
  CHECK_THROWS_AS(eps_sweep(u0, {0.2, 0.1}, mesh, mc_kernel(), far), std::invalid_argument);
}

TEST_CASE("singular-time detection: a regular ladder flags nothing") {
  IntervalSet epochs = detect_singular_times(shared_sweep());
  REQUIRE(epochs.intervals.size() == 1);
  CHECK(epochs.intervals[0].first == 0.0);
  CHECK(epochs.intervals[0].second == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("singular-time detection: monotone gradient growth down the ladder is flagged") {
  TimeMesh mesh = TimeMesh::uniform(1.0, 10);
  SweepResult sw;
  sw.grid = grid16();
  sw.mesh = mesh;
  sw.eps = {0.2, 0.1, 0.05};
  for (int i = 0; i < 3; ++i) {
    FlowTrace tr;
    tr.t = mesh.t;
    tr.h1semi.assign(mesh.t.size(), 1.0);
    sw.traces.push_back(tr);
  }
  // node 5: gradients 1 -> 2.1 -> 4.5, at least doubling per halving
  sw.traces[1].h1semi[5] = 2.1;
  sw.traces[2].h1semi[5] = 4.5;

  IntervalSet epochs = detect_singular_times(sw);
  REQUIRE(epochs.intervals.size() == 2);
  CHECK(epochs.intervals[0].first == 0.0);
  CHECK(epochs.intervals[0].second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(epochs.intervals[1].first == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(epochs.intervals[1].second == doctest::Approx(1.0).epsilon(1e-12));

  // growth below the rule leaves the ladder unflagged
  sw.traces[2].h1semi[5] = 3.9;
  CHECK(detect_singular_times(sw).intervals.size() == 1);

  // the rule needs at least three rungs
  SweepResult two = sw;
  two.eps = {0.2, 0.1};
  two.traces.pop_back();
  CHECK_THROWS_AS(detect_singular_times(two), std::invalid_argument);
}

TEST_CASE("sqrt-length budget of a regularity decomposition") {
  const MeasuredConstants& mc = mc_batch();
  IntervalSet set = make_interval_set(1.0, {{0.0, 0.25}, {0.5, 1.0}});
  SqrtBudget b = sqrt_length_budget(set, 2.0, mc);
  CHECK(b.sum == doctest::Approx(0.5 + std::sqrt(0.5)).epsilon(1e-15));
  double c = 4.0 * M_PI * mc.c_prime * mc.c_grad_heat;
  CHECK(b.budget == doctest::Approx(4.0 * c * c / 4.0).epsilon(1e-12));

  // unbounded epochs cost nothing: only finite lengths are summed
  IntervalSet tail = make_interval_set(1.0, {{0.0, 0.25}, {0.5, kInfinity}});
  CHECK(sqrt_length_budget(tail, 2.0, mc).sum == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(sqrt_length_budget(set, 2.0, mc_kernel()), std::invalid_argument);
}

TEST_CASE("box-counting dimension: harmonic and cubic point sets, intervals, degenerate sets") {
  std::vector<double> deltas = default_delta_ladder();
  REQUIRE(deltas.size() == 11);
  CHECK(deltas.front() == 0.1);
  CHECK(deltas.back() < 1.1e-4);
  for (std::size_t k = 1; k < deltas.size(); ++k)
    CHECK(deltas[k] == doctest::Approx(0.5 * deltas[k - 1]).epsilon(1e-15));

  std::vector<double> harmonic{0.0}, cubic{0.0};
  for (int n = 1; n <= 1000; ++n) {
    harmonic.push_back(1.0 / n);
    cubic.push_back(std::pow(double(n), -3.0));
  }
  BoxDimEstimate h = box_dimension_estimate(harmonic, deltas);
  CHECK(std::abs(h.dimension - 0.5) <= 0.05);
  CHECK(h.std_error < 0.05);
  REQUIRE(h.measure.size() == deltas.size());
  REQUIRE(h.count.size() == deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    CHECK(h.measure[k] > 0.0);
    CHECK(h.count[k] >= 1);
  }

  BoxDimEstimate c3 = box_dimension_estimate(cubic, deltas);
  CHECK(std::abs(c3.dimension - 0.25) <= 0.05);

  // a full interval has dimension 1, two points dimension 0
  IntervalSet unit = make_interval_set(1.0, {{0.0, 1.0}});
  BoxDimEstimate one = box_dimension_estimate(unit, deltas);
  CHECK(std::abs(one.dimension - 1.0) <= 0.05);
  for (int n : one.count) CHECK(n == 1);

  BoxDimEstimate two = box_dimension_estimate(std::vector<double>{0.0, 1.0}, deltas);
  CHECK(std::abs(two.dimension) <= 1e-9);
  for (int n : two.count) CHECK(n == 2);

  CHECK_THROWS_AS(box_dimension_estimate(harmonic, {0.1, 0.05}), std::invalid_argument);
}

TEST_CASE("tail-energy separation: calibrated constant gives nonnegative slack") {
  GridSpec g{4.0, 16};
  MeasuredConstants mc = measure_constants(g, 8, 0.25, kSeed, 0);
  VectorField u0 = bump_solenoidal(g, Eigen::Vector3d::Zero(), 0.5, 1.0);
  TimeMesh mesh = TimeMesh::uniform(0.2, 8);

  LerayOptions opts;
  opts.checkpoints = {0.0, 0.2};
  opts.pressure_trace = true;
  LerayRun run = leray_solve(u0, 0.5, mesh, mc, opts);
  REQUIRE(run.checkpoint_times.size() == 2);

  double c_tail = tail_constant_calibrate({run.trace}, {0.1, 0.2});
  CHECK(c_tail > 0.0);
  CHECK(std::isfinite(c_tail));

  double slack = tail_energy_bound_check(run, 1.0, 1.9, 0.2, c_tail);
  CHECK(slack >= 0.0);

  CHECK_THROWS_AS(tail_energy_bound_check(run, 1.9, 1.0, 0.2, c_tail), std::invalid_argument);
  CHECK_THROWS_AS(tail_energy_bound_check(run, 1.0, 2.5, 0.2, c_tail), std::invalid_argument);
  CHECK_THROWS_AS(tail_energy_bound_check(run, 1.0, 1.9, 0.123, c_tail), std::invalid_argument);

  LerayRun bare = leray_solve(u0, 0.5, mesh, mc, [] {
    LerayOptions o;
    o.checkpoints = {0.0, 0.2};
    return o;
  }());
  CHECK_THROWS_AS(tail_constant_calibrate({bare.trace}, {0.2}), std::invalid_argument);
}

TEST_CASE("late-time decay: small data passes, a short horizon is conditional") {
  GridSpec g = grid16();
  const MeasuredConstants& mc = mc_batch();
  VectorField u0 = random_solenoidal(g, 13, 2.0, 3e-3, 2.0);
  TimeMesh mesh = TimeMesh::uniform(0.8, 32);
  LerayRun run = leray_solve(u0, 0.2, mesh, mc, [] {
    LerayOptions o;
    o.majorant = false;
    return o;
  }());

  LateTimeReport rep = late_time_decay_check(run.trace, run.trace.l2[0], mc);
  CHECK(rep.threshold == 0.0);  // data already under the smallness condition
  CHECK(rep.window_nodes >= 5);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.slope_grad <= -0.5 + 0.1);
  CHECK(rep.slope_linf <= -0.75 + 0.1);
  CHECK(rep.c_grad > 0.0);
  CHECK(rep.c_linf > 0.0);

  // large data on a horizon shorter than its forced-decay threshold
  FlowTrace big;
  big.t = {0.0, 0.005, 0.01};
  big.l2 = {10.0, 10.0, 10.0};
  big.linf = {10.0, 10.0, 10.0};
  big.h1semi = {10.0, 10.0, 10.0};
  LateTimeReport na = late_time_decay_check(big, 10.0, mc);
  CHECK(na.verdict == Verdict::NotApplicable);
  CHECK(na.threshold > big.t.back());

  CHECK_THROWS_AS(late_time_decay_check(run.trace, 0.0, mc), std::invalid_argument);
  CHECK_THROWS_AS(late_time_decay_check(run.trace, 1.0, mc_kernel()), std::invalid_argument);
}

TEST_CASE("strong convergence down the ladder at the checkpoints") {
  const SweepResult& sw = shared_sweep();
  ConvergenceReport rep = strong_l2_convergence_check(sw, sw.checkpoint_times);

  CHECK(rep.verdict == Verdict::Pass);
  REQUIRE(rep.t.size() == 2);
  REQUIRE(rep.checked.size() == 2);
  CHECK(rep.checked[0] == 1);
  CHECK(rep.checked[1] == 1);
  for (std::size_t k = 0; k < rep.t.size(); ++k) {
    REQUIRE(rep.distance_gaps[k].size() == 2);
    REQUIRE(rep.norm_gaps[k].size() == 2);
    double grace = 1e-12 * (1.0 + rep.distance_gaps[k][0] + rep.norm_gaps[k][0]);
    CHECK(rep.distance_gaps[k][1] <= rep.distance_gaps[k][0] + grace);
    CHECK(rep.norm_gaps[k][1] <= rep.norm_gaps[k][0] + grace);
  }

  CHECK_THROWS_AS(strong_l2_convergence_check(sw, {0.123}), std::invalid_argument);
}
