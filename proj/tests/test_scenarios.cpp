#include <catch2/catch_amalgamated.hpp>

#include "oco/algo.hpp"
#include "oco/oracle.hpp"
#include "oco/scenarios.hpp"

using namespace oco;

TEST_CASE("splitmix64 golden outputs") {
  Prng prng(42);
  CHECK(prng.next() == 0xBDD732262FEB6E95ULL);
  Prng u(42);
  CHECK(u.u01() == 0.7415648787718233);
  CHECK(u.u01() == 0.1599103928769201);
  CHECK(u.u01() == 0.27860113025513866);
  CHECK(u.u01() == 0.34419071652363753);
  SECTION("range") {
    Prng p(7);
    for (int i = 0; i < 10000; ++i) {
      const double v = p.u01();
      REQUIRE(v >= 0.0);
      REQUIRE(v < 1.0);
    }
  }
}

TEST_CASE("datacenter golden draws (n = 2, seed 42)") {
  auto stream = datacenter_scenario(2, 42);
  auto* dc = dynamic_cast<detail::LinearCostStream*>(stream.get());
  REQUIRE(dc != nullptr);
  const Vec& a = dc->efficiency();
  CHECK(a[0] == 1.2415648787718232);
  CHECK(a[1] == 0.6599103928769201);

  // b_1 = 0.5 <1, a>; l_t drawn from the continuation of the same stream
  CHECK(stream->perturbation(1) == Vec{0.9507376358243717});
  const Vec l1 = stream->cost_subgradient(1, zeros(2));
  CHECK(l1[0] == 0.27860113025513866);
  CHECK(l1[1] == 0.34419071652363753);
  stream->observe_action(1, zeros(2));
  // x_1 = 0 so b_2 = b_1
  CHECK(stream->perturbation(2) == Vec{0.9507376358243717});
  const Vec l2 = stream->cost_subgradient(2, zeros(2));
  CHECK(l2[0] == 0.03803016854024621);
  CHECK(l2[1] == 0.8682280765465323);
  stream->observe_action(2, zeros(2));
  // x_2 = 0 again under Algorithm 1's first step, so b_3 = b_1 as well
  CHECK(stream->perturbation(3) == Vec{0.9507376358243717});
}

TEST_CASE("datacenter emissions respect the declared constants") {
  auto stream = datacenter_scenario(5, 3);
  const ProblemSpec& spec = stream->problem();
  const auto tr = run(spec, *stream, 0.5, 300);
  for (const auto& r : tr.rounds) {
    REQUIRE(norm2(r.cost_coeffs) <= spec.consts.F_star + 1e-12);
    REQUIRE(norm2(add(r.g_x, r.b)) <= spec.consts.G + 1e-9);
    REQUIRE(r.b[0] > 0.0);
    REQUIRE(r.b[0] <= 0.5 * sum(dynamic_cast<detail::LinearCostStream&>(*stream).efficiency()) + 1e-12);
  }
  SECTION("the Slater margin is checked on every emission") {
    // perturbation() raises if g(x_hat) + b + eta > 0; a full run exercising it
    // without a throw is the positive half of that check
    SUCCEED();
  }
}

TEST_CASE("runs are reproducible per (n, seed) and differ across seeds") {
  auto a1 = datacenter_scenario(3, 9);
  auto a2 = datacenter_scenario(3, 9);
  const auto t1 = run(a1->problem(), *a1, 0.5, 150);
  const auto t2 = run(a2->problem(), *a2, 0.5, 150);
  for (int t = 0; t < 150; ++t) {
    REQUIRE(t1.rounds[t].x == t2.rounds[t].x);
    REQUIRE(t1.rounds[t].y == t2.rounds[t].y);
    REQUIRE(t1.rounds[t].b == t2.rounds[t].b);
  }
  auto a3 = datacenter_scenario(3, 10);
  const auto t3 = run(a3->problem(), *a3, 0.5, 150);
  CHECK(t1.rounds[149].x != t3.rounds[149].x);
}

TEST_CASE("all-feasible scenario keeps the constraint strictly slack") {
  auto stream = all_feasible_scenario(4, 21);
  const auto tr = run(stream->problem(), *stream, 0.5, 200);
  for (const auto& r : tr.rounds) {
    REQUIRE(r.g_x[0] + r.b[0] <= -0.05 + 1e-12);
  }
  // with the constraint never active the dual stays at zero
  for (const auto& r : tr.rounds) REQUIRE(r.y == Vec{0.0});
  CHECK(violation(tr) == 0.0);
}

TEST_CASE("static LP scenario is self-consistent") {
  auto sc = static_lp_scenario(4, 42);
  REQUIRE(sc.stream != nullptr);
  const ProblemSpec& spec = sc.stream->problem();
  CHECK(sc.b == Catch::Approx(0.5 * sum(sc.efficiency)).margin(1e-15));
  // frozen cost and perturbation
  CHECK(sc.stream->cost_subgradient(1, zeros(4)) == sc.cost);
  CHECK(sc.stream->cost_subgradient(7, zeros(4)) == sc.cost);
  CHECK(sc.stream->perturbation(1) == Vec{sc.b});
  CHECK(sc.stream->perturbation(5) == Vec{sc.b});
  // declared optimum matches the grid oracle and is feasible
  const FeasibleSetSpec fs{spec.action_set, spec.constraints, Vec{sc.b}};
  const auto g = grid_minimize(OfflineObjective::linear(sc.cost), fs, 1e-3);
  CHECK(std::abs(g.value - sc.f_star) < 2e-3);
  REQUIRE(spec.action_set.contains(sc.minimizer, 1e-9));
  CHECK(dot(sc.efficiency, sc.minimizer) >= sc.b - 1e-9);
  CHECK(dot(sc.cost, sc.minimizer) == Catch::Approx(sc.f_star).margin(1e-12));
}

TEST_CASE("static LP optimum is invariant under coordinate permutation") {
  auto sc = static_lp_scenario(3, 5);
  // permute coordinates of the same instance and resolve by the exact route
  const std::vector<std::size_t> perm{2, 0, 1};
  Vec Lp(3), ap(3);
  for (std::size_t i = 0; i < 3; ++i) {
    Lp[i] = sc.cost[perm[i]];
    ap[i] = sc.efficiency[perm[i]];
  }
  Matrix A(1, 3);
  for (int j = 0; j < 3; ++j) A(0, j) = -ap[static_cast<std::size_t>(j)];
  FeasibleSetSpec fs{ActionSet::unit_box(3), ConstraintMap::affine(A, {0.0}), Vec{sc.b}};
  const auto r = hindsight_cost(OfflineObjective::linear(Lp), fs);
  CHECK(r.value == Catch::Approx(sc.f_star).margin(1e-12));
}

TEST_CASE("scenario argument validation") {
  CHECK_THROWS_AS(datacenter_scenario(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(all_feasible_scenario(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(static_lp_scenario(0, 1), std::invalid_argument);
  auto stream = datacenter_scenario(2, 1);
  CHECK_THROWS_AS(stream->perturbation(0), std::invalid_argument);
  stream->observe_action(1, zeros(2));
  CHECK_THROWS_AS(stream->observe_action(3, zeros(2)), std::logic_error);
}
