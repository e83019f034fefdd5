#include <catch2/catch_amalgamated.hpp>

#include "oco/action_set.hpp"
#include "oco/bregman.hpp"
#include "oco/scenarios.hpp"

using namespace oco;

TEST_CASE("bregman divergence closed cases") {
  const auto half = BregmanGenerator::half_sq_euclidean();
  CHECK(bregman_divergence(half, {3.0, -1.0}, {3.0, -1.0}) == 0.0);
  CHECK(bregman_divergence(half, {1.0, 0.0}, {0.0, 0.0}) == Catch::Approx(0.5));
  CHECK_THROWS_AS(bregman_divergence(half, {1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("weighted quadratic divergence matches term-by-term evaluation") {
  const auto gen = BregmanGenerator::weighted_quadratic({2.0, 1.0});
  const Vec a{1.0, 1.0}, b{0.0, 0.0};
  // independent evaluation of psi(a) - psi(b) - <a-b, grad psi(b)>
  const double psi_a = 0.5 * (2.0 * 1.0 + 1.0 * 1.0);
  const double psi_b = 0.0;
  const double cross = 0.0;  // grad psi(0) = 0
  CHECK(bregman_divergence(gen, a, b) == Catch::Approx(psi_a - psi_b - cross).margin(1e-15));
}

TEST_CASE("generator gradient matches finite differences") {
  Prng prng(3);
  const auto gens = {BregmanGenerator::half_sq_euclidean(),
                     BregmanGenerator::weighted_quadratic({0.7, 2.5, 1.1})};
  for (const auto& gen : gens) {
    Vec x{0.3, -1.2, 2.0};
    if (gen.kind() == BregmanGenerator::Kind::HalfSqEuclidean) x = {0.3, -1.2, 2.0};
    const Vec g = gen.gradient(x);
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (gen.value(xp) - gen.value(xm)) / (2.0 * h);
      CHECK(g[i] == Catch::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("three-point identity") {
  const auto half = BregmanGenerator::half_sq_euclidean();
  CHECK(three_point_residual(half, {1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(std::abs(three_point_residual(half, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0})) < 1e-15);

  const auto gen = BregmanGenerator::weighted_quadratic({3.0, 5.0});
  Prng prng(99);
  for (int i = 0; i < 1000; ++i) {
    auto rv = [&] {
      Vec v(2);
      for (auto& e : v) e = -10.0 + 20.0 * prng.u01();
      return v;
    };
    const Vec a = rv(), b = rv(), c = rv();
    const double res = std::abs(three_point_residual(gen, a, b, c));
    REQUIRE(res <= 1e-10 * (1.0 + norm2(a) + norm2(b) + norm2(c)));
  }
}

TEST_CASE("strong convexity / smoothness sandwich") {
  Prng prng(17);
  const auto gens = {BregmanGenerator::half_sq_euclidean(),
                     BregmanGenerator::weighted_quadratic({0.4, 3.0})};
  for (const auto& gen : gens) {
    for (int i = 0; i < 200; ++i) {
      Vec a(2), b(2);
      for (auto& v : a) v = -5.0 + 10.0 * prng.u01();
      for (auto& v : b) v = -5.0 + 10.0 * prng.u01();
      const double d2 = dot(sub(a, b), sub(a, b));
      const double B = bregman_divergence(gen, a, b);
      REQUIRE(B >= gen.sigma() / 2.0 * d2 - 1e-12);
      REQUIRE(B <= gen.smoothness() / 2.0 * d2 + 1e-12);
      REQUIRE(B >= -1e-15);
    }
  }
}

TEST_CASE("box projection") {
  const auto box = ActionSet::unit_box(2);
  CHECK(box.project({1.5, -0.2}) == Vec{1.0, 0.0});
  CHECK(box.project({0.3, 0.7}) == Vec{0.3, 0.7});
  SECTION("idempotent and member") {
    Prng prng(5);
    for (int i = 0; i < 100; ++i) {
      Vec p{-2.0 + 4.0 * prng.u01(), -2.0 + 4.0 * prng.u01()};
      const Vec q = box.project(p);
      CHECK(box.contains(q, 1e-12));
      CHECK(norm2(sub(box.project(q), q)) == 0.0);
    }
  }
}

TEST_CASE("box diameter bounds sampled pairs") {
  const auto box = ActionSet::box({-1.0, 0.0, 2.0}, {1.0, 3.0, 2.5});
  const double D = box.diameter();
  Prng prng(8);
  for (int i = 0; i < 200; ++i) {
    Vec u(3), v(3);
    for (int j = 0; j < 3; ++j) {
      u[j] = box.lower()[j] + (box.upper()[j] - box.lower()[j]) * prng.u01();
      v[j] = box.lower()[j] + (box.upper()[j] - box.lower()[j]) * prng.u01();
    }
    REQUIRE(norm2(sub(u, v)) <= D + 1e-12);
  }
}

TEST_CASE("simplex projection vs grid search") {
  const auto sx = ActionSet::simplex(2, 1.0);
  const Vec p{0.8, 0.8};
  const Vec q = sx.project(p);
  CHECK(q[0] == Catch::Approx(0.5).margin(1e-12));
  CHECK(q[1] == Catch::Approx(0.5).margin(1e-12));
  // brute force over the 1-simplex at 1e-3 resolution
  double best = 1e30;
  Vec best_x(2);
  for (int k = 0; k <= 1000; ++k) {
    Vec x{k * 1e-3, 1.0 - k * 1e-3};
    const double d = norm2(sub(x, p));
    if (d < best) {
      best = d;
      best_x = x;
    }
  }
  CHECK(norm2(sub(q, best_x)) < 2e-3);
  CHECK(sx.contains(q, 1e-12));
}

TEST_CASE("ball projection") {
  const auto ball = ActionSet::euclidean_ball({0.0, 0.0}, 1.0);
  CHECK(norm2(ball.project({3.0, 4.0})) == Catch::Approx(1.0));
  CHECK(ball.project({0.1, 0.2}) == Vec{0.1, 0.2});
  CHECK(ball.diameter() == 2.0);
}

TEST_CASE("nonnegative projection") {
  CHECK(positive_part({1.0, -2.0}) == Vec{1.0, 0.0});
  CHECK(positive_part({0.0, 0.0}) == Vec{0.0, 0.0});
  CHECK(positive_part({-3.5}) == Vec{0.0});
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(ActionSet::box({1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ActionSet::euclidean_ball({0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ActionSet::simplex(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(BregmanGenerator::weighted_quadratic({1.0, 0.0}), std::invalid_argument);
}
