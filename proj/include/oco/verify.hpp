#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "oco/metrics.hpp"
#include "oco/oracle.hpp"
#include "oco/prox.hpp"
#include "oco/scenarios.hpp"

namespace oco {

struct VerifyItem {
  std::string name;
  bool pass{false};
  double worst{0.0};  // worst residual / slack observed, meaning depends on the suite
};

namespace verify {

inline std::vector<long> lemma5_t_grid() {
  std::vector<long> ts;
  for (long t = 1; t <= 10000; ++t) ts.push_back(t);
  // 30 log-spaced points up to 1e6
  for (int i = 0; i < 30; ++i) {
    double e = 4.0 + (6.0 - 4.0) * (i + 1) / 30.0;
    ts.push_back(static_cast<long>(std::llround(std::pow(10.0, e))));
  }
  return ts;
}

inline VerifyItem lemma5_sweep() {
  VerifyItem item{"lemma5 window sums", true, 0.0};
  const auto ts = lemma5_t_grid();
  for (double eps = 0.0; eps < 0.95; eps += 0.1) {
    for (long t : ts) {
      const auto r = lemma5_check(t, eps);
      const double margin = std::min({r.sum_rho - std::log(2.0), 3.0 - r.sum_rho, 3.0 - r.sum_rho_sq});
      item.worst = std::min(item.worst == 0.0 ? margin : item.worst, margin);
      if (!r.pass) item.pass = false;
    }
  }
  return item;
}

inline Vec random_vec(Prng& prng, int n, double lo, double hi) {
  Vec v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * prng.u01();
  return v;
}

inline VerifyItem bregman_identity_suite(int samples = 1000, std::uint64_t seed = 7) {
  VerifyItem item{"bregman three-point identity", true, 0.0};
  Prng prng(seed);
  const auto half = BregmanGenerator::half_sq_euclidean();
  for (int i = 0; i < samples; ++i) {
    const int n = 1 + static_cast<int>(prng.next() % 5);
    const auto weighted = BregmanGenerator::weighted_quadratic(random_vec(prng, n, 0.2, 5.0));
    for (const auto& gen : {half, weighted}) {
      Vec a = random_vec(prng, n, -10.0, 10.0);
      Vec b = random_vec(prng, n, -10.0, 10.0);
      Vec c = random_vec(prng, n, -10.0, 10.0);
      const double r = std::abs(three_point_residual(gen, a, b, c));
      item.worst = std::max(item.worst, r);
      if (r > 1e-10 * (1.0 + norm2(a) + norm2(b) + norm2(c))) item.pass = false;
    }
  }
  return item;
}

// closed form vs generic inner solver on random affine instances
inline VerifyItem prox_cross_validation(int instances = 200, std::uint64_t seed = 11) {
  VerifyItem item{"prox closed form vs inner solver", true, 0.0};
  Prng prng(seed);
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + static_cast<int>(prng.next() % 5);
    const int m = 1 + static_cast<int>(prng.next() % 3);
    Matrix A(m, n);
    for (auto& v : A.data) v = -1.0 + 2.0 * prng.u01();
    Vec c = random_vec(prng, m, -1.0, 1.0);
    AssumptionConstants consts;
    consts.D = std::sqrt(static_cast<double>(n));
    consts.F_star = consts.G_star = consts.G = consts.eta = 1.0;
    consts.slater_point = Vec(static_cast<std::size_t>(n), 0.5);
    ProblemSpec spec(ActionSet::unit_box(n), ConstraintMap::affine(A, c),
                     BregmanGenerator::half_sq_euclidean(), BregmanGenerator::half_sq_euclidean(),
                     consts);
    // same constraints, but routed through the general-callable path so the
    // closed form does not apply
    ProblemSpec generic(
        ActionSet::unit_box(n),
        ConstraintMap::general(
            n, m, [A, c](const Vec& x) { return add(A.apply(x), c); },
            [A](const Vec&) { return A; }, 0.0),
        BregmanGenerator::half_sq_euclidean(), BregmanGenerator::half_sq_euclidean(), consts);

    Vec x = random_vec(prng, n, 0.0, 1.0);
    Vec y = random_vec(prng, m, 0.0, 2.0);
    Vec f_grad = random_vec(prng, n, -2.0, 2.0);
    const double rho = 0.05 + prng.u01();
    ProxConfig cfg;
    cfg.inner_tol = 1e-12;
    Vec closed = primal_step(spec, x, y, f_grad, rho, cfg);
    Vec inner = primal_step(generic, x, y, f_grad, rho, cfg);
    const double diff = norm2(sub(closed, inner));
    item.worst = std::max(item.worst, diff);
    if (diff > 1e-8) item.pass = false;
  }
  return item;
}

inline FeasibleSetSpec random_cover_instance(Prng& prng, int n, Vec& L_out) {
  Vec a = random_vec(prng, n, 0.5, 1.5);
  L_out = random_vec(prng, n, 0.0, 1.0);
  const double r = (0.2 + 0.6 * prng.u01()) * sum(a);  // coverable demand
  Matrix A(1, n);
  for (int j = 0; j < n; ++j) A(0, j) = -a[j];
  return FeasibleSetSpec{ActionSet::unit_box(n), ConstraintMap::affine(std::move(A), Vec{0.0}),
                         Vec{r}};
}

inline VerifyItem knapsack_vs_grid(int instances = 100, std::uint64_t seed = 13) {
  VerifyItem item{"knapsack vs grid oracle", true, 0.0};
  Prng prng(seed);
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + static_cast<int>(prng.next() % 3);
    Vec L;
    FeasibleSetSpec fs = random_cover_instance(prng, n, L);
    const auto exact = hindsight_cost(OfflineObjective::linear(L), fs);
    const auto grid = grid_minimize(OfflineObjective::linear(L), fs, 1e-3);
    const double diff = std::abs(exact.value - grid.value);
    item.worst = std::max(item.worst, diff);
    if (diff > 2e-3) item.pass = false;
  }
  return item;
}

inline VerifyItem knapsack_vs_penalty(int instances = 100, std::uint64_t seed = 17) {
  VerifyItem item{"knapsack vs penalty solver", true, 0.0};
  Prng prng(seed);
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + static_cast<int>(prng.next() % 10);
    Vec L;
    FeasibleSetSpec fs = random_cover_instance(prng, n, L);
    const auto exact = hindsight_cost(OfflineObjective::linear(L), fs);
    const auto generic = hindsight_cost_generic(OfflineObjective::linear(L), fs);
    const double diff = std::abs(exact.value - generic.value);
    item.worst = std::max(item.worst, diff);
    if (diff > 1e-6) item.pass = false;
  }
  return item;
}

inline std::vector<VerifyItem> run_all() {
  return {lemma5_sweep(), bregman_identity_suite(), prox_cross_validation(), knapsack_vs_grid(),
          knapsack_vs_penalty()};
}

}  // namespace verify
}  // namespace oco
