#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "oco/prox.hpp"
#include "oco/trace.hpp"

namespace oco {

struct PerturbationStats {
  Vec underline_b;  // (1/T) sum b_t
  Vec bar_b;        // componentwise max
};

inline PerturbationStats perturbation_stats(const RunTrace& trace) {
  if (trace.rounds.empty()) throw std::invalid_argument("perturbation_stats: empty trace");
  const std::size_t m = trace.rounds.front().b.size();
  PerturbationStats s;
  s.underline_b = zeros(m);
  s.bar_b = Vec(m, -std::numeric_limits<double>::infinity());
  for (const auto& r : trace.rounds) {
    for (std::size_t j = 0; j < m; ++j) {
      s.underline_b[j] += r.b[j];
      s.bar_b[j] = std::max(s.bar_b[j], r.b[j]);
    }
  }
  s.underline_b = scaled(s.underline_b, 1.0 / static_cast<double>(trace.rounds.size()));
  return s;
}

/// Shift vector w in [underline_b, bar_b] satisfying sum_t <y_t, b_{t+1} - w> <= 0.
/// Rule: per component, the dual-weighted mean of b_{t+1} clamped to the interval
/// (0/0 resolves to underline_b). The sum runs over t = 1..T-1 since b_{T+1} is
/// not observed within the horizon.
inline Vec select_b_T(const RunTrace& trace) {
  const PerturbationStats stats = perturbation_stats(trace);
  const std::size_t m = stats.underline_b.size();
  Vec num = zeros(m), den = zeros(m);
  for (int t = 0; t + 1 < trace.horizon(); ++t) {
    const Vec& y = trace.rounds[t].y;
    const Vec& b_next = trace.rounds[t + 1].b;
    for (std::size_t j = 0; j < m; ++j) {
      num[j] += y[j] * b_next[j];
      den[j] += y[j];
    }
  }
  Vec w(m);
  for (std::size_t j = 0; j < m; ++j) {
    double wj = den[j] > 0.0 ? num[j] / den[j] : stats.underline_b[j];
    w[j] = std::clamp(wj, stats.underline_b[j], stats.bar_b[j]);
  }
  return w;
}

/// Direct evaluation of the Theorem-1 admissibility condition for a candidate w.
inline double b_T_condition_value(const RunTrace& trace, const Vec& w) {
  double s = 0.0;
  for (int t = 0; t + 1 < trace.horizon(); ++t) {
    s += dot(trace.rounds[t].y, sub(trace.rounds[t + 1].b, w));
  }
  return s;
}

/// {x in C | g(x) + w <= 0}: the hindsight comparator set.
struct FeasibleSetSpec {
  ActionSet base;
  ConstraintMap constraints;
  Vec w;
};

struct OfflineObjective {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::optional<Vec> linear_coeffs;  // set when the objective is <L, x>
  double grad_lipschitz{0.0};

  static OfflineObjective linear(Vec L) {
    OfflineObjective o;
    Vec Lc = L;
    o.value = [L = std::move(L)](const Vec& x) { return dot(L, x); };
    o.grad = [Lc](const Vec&) { return Lc; };
    o.linear_coeffs = std::move(Lc);
    return o;
  }
};

struct HindsightResult {
  double value{0.0};
  Vec minimizer;
};

struct InfeasibleSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// min <L,x> s.t. <a,x> >= r, lo <= x <= hi, a >= 0 elementwise.
// Free items (L_i <= 0) go to hi; the rest fill the cover by ascending L_i/a_i.
inline HindsightResult fractional_knapsack_cover(const Vec& L, const Vec& a, double r,
                                                 const Vec& lo, const Vec& hi) {
  const std::size_t n = L.size();
  Vec x(n);
  double cover = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = L[i] <= 0.0 ? hi[i] : lo[i];
    cover += a[i] * x[i];
  }
  if (cover < r - 1e-12) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (L[i] > 0.0 && a[i] > 0.0 && hi[i] > lo[i]) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t i, std::size_t j) { return L[i] * a[j] < L[j] * a[i]; });
    for (std::size_t i : idx) {
      if (cover >= r - 1e-12) break;
      double room = (hi[i] - x[i]) * a[i];
      double need = r - cover;
      if (room <= need) {
        cover += room;
        x[i] = hi[i];
      } else {
        x[i] += need / a[i];
        cover = r;
      }
    }
    if (cover < r - 1e-9) throw InfeasibleSet("fractional_knapsack_cover: cover constraint infeasible");
  }
  double val = 0.0;
  for (std::size_t i = 0; i < n; ++i) val += L[i] * x[i];
  return {val, std::move(x)};
}

inline bool knapsack_applicable(const OfflineObjective& obj, const FeasibleSetSpec& fs) {
  if (!obj.linear_coeffs) return false;
  if (fs.base.kind() != ActionSet::Kind::Box) return false;
  if (!fs.constraints.is_affine() || fs.constraints.num_constraints() != 1) return false;
  const Matrix& A = fs.constraints.matrix();
  for (int j = 0; j < A.cols; ++j) {
    if (A(0, j) > 0.0) return false;  // need a covering row: A x + c + w <= 0 with A <= 0
  }
  return true;
}

// Quadratic-penalty continuation: minimize obj + mu ||[g+w]^+||^2 over C with
// projected gradient, doubling mu per stage. The stage tolerance scales with mu
// because the gradient mapping of the penalized problem carries cancellation
// noise of order mu * eps_machine near the optimum.
inline HindsightResult penalty_continuation(const OfflineObjective& obj, const FeasibleSetSpec& fs,
                                            const ProxConfig& cfg) {
  const int n = fs.base.dimension();
  const int m = fs.constraints.num_constraints();
  Vec x = fs.base.project(zeros(n));
  // start gentle so flat directions traverse the box while steps are still
  // large, then double up to mu ~ 3.4e7 where the penalty bias on the value
  // drops below 1e-6
  double mu = 1.0;
  const int stages = 26;
  double pen_curvature_base = 0.0;
  if (fs.constraints.is_affine()) {
    double fro = fs.constraints.matrix().frobenius_norm();
    pen_curvature_base = 2.0 * fro * fro;
  } else {
    pen_curvature_base = 2.0 * fs.constraints.weighted_gradient_lipschitz(Vec(m, 1.0)) + 2.0;
  }
  ProxConfig inner = cfg;
  inner.inner_max_iters = std::max(cfg.inner_max_iters, 200000);
  double final_gm = 0.0;
  bool final_converged = false;
  for (int stage = 0; stage < stages; ++stage) {
    inner.inner_tol = std::max(cfg.inner_tol, 1e-15 * mu);
    auto grad = [&](const Vec& u) {
      Vec g = obj.grad(u);
      Vec slack = add(fs.constraints.value(u), fs.w);
      Vec viol = positive_part(slack);
      Vec pen = fs.constraints.weighted_gradient(u, viol);
      axpy(g, 2.0 * mu, pen);
      return g;
    };
    const double lips = obj.grad_lipschitz + mu * pen_curvature_base + 1e-12;
    auto project = [&](const Vec& p) { return fs.base.project(p); };
    PgResult res = pg_iterate(std::move(x), grad, project, lips, inner);
    x = std::move(res.u);  // keep the warm start even when a stage runs out of budget
    final_gm = res.gm_norm;
    final_converged = res.converged;
    mu *= 2.0;
  }
  if (!final_converged && final_gm > 1e-6) throw ConvergenceFailure(final_gm);
  Vec slack = positive_part(add(fs.constraints.value(x), fs.w));
  if (norm2(slack) > 1e-6) throw InfeasibleSet("penalty_continuation: residual infeasibility " +
                                               std::to_string(norm2(slack)));
  return {obj.value(x), std::move(x)};
}

}  // namespace detail

/// Best fixed decision in hindsight over {x in C | g(x) + w <= 0}. Exact
/// fractional-knapsack route for linear cost / box / single covering constraint;
/// quadratic-penalty continuation otherwise.
inline HindsightResult hindsight_cost(const OfflineObjective& obj, const FeasibleSetSpec& fs,
                                      const ProxConfig& cfg = {}) {
  if (detail::knapsack_applicable(obj, fs)) {
    const Matrix& A = fs.constraints.matrix();
    const int n = fs.base.dimension();
    Vec a(n);
    for (int j = 0; j < n; ++j) a[j] = -A(0, j);
    double r = fs.constraints.offset()[0] + fs.w[0];  // <a,x> >= c + w
    return detail::fractional_knapsack_cover(*obj.linear_coeffs, a, r, fs.base.lower(),
                                             fs.base.upper());
  }
  return detail::penalty_continuation(obj, fs, cfg);
}

/// Force the generic route (used to cross-validate the exact one).
inline HindsightResult hindsight_cost_generic(const OfflineObjective& obj, const FeasibleSetSpec& fs,
                                              const ProxConfig& cfg = {}) {
  return detail::penalty_continuation(obj, fs, cfg);
}

/// Test-oracle brute force over the full coordinate lattice of spacing
/// `resolution`: linear objective, box set, single affine covering constraint.
/// Enumerating the pivot coordinate is unnecessary — for a covering row the
/// feasible pivot values form an upper range of the lattice, so the best one is
/// its smallest point (largest when the pivot cost is <= 0). The result equals
/// the minimum over every lattice point, without visiting all of them.
inline HindsightResult grid_minimize(const OfflineObjective& obj, const FeasibleSetSpec& fs,
                                     double resolution = 1e-3) {
  if (!detail::knapsack_applicable(obj, fs)) {
    throw std::invalid_argument(
        "grid_minimize: needs a linear objective, a box set, and one affine covering constraint");
  }
  const int n = fs.base.dimension();
  const Vec& L = *obj.linear_coeffs;
  const Matrix& Am = fs.constraints.matrix();
  Vec a(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = -Am(0, j);
  const double r = fs.constraints.offset()[0] + fs.w[0];  // <a,x> >= r
  const Vec& lo = fs.base.lower();
  const Vec& hi = fs.base.upper();

  int pivot = 0;
  for (int i = 1; i < n; ++i) {
    if (a[static_cast<std::size_t>(i)] > a[static_cast<std::size_t>(pivot)]) pivot = i;
  }
  if (!(a[static_cast<std::size_t>(pivot)] > 0.0)) {
    throw std::invalid_argument("grid_minimize: covering row must have a positive coefficient");
  }

  std::vector<int> counts;
  std::vector<int> free_idx;
  long total = 1;
  for (int i = 0; i < n; ++i) {
    if (i == pivot) continue;
    free_idx.push_back(i);
    counts.push_back(static_cast<int>(std::floor((hi[i] - lo[i]) / resolution + 1e-9)) + 1);
    total *= counts.back();
  }
  const double ap = a[static_cast<std::size_t>(pivot)];
  const double Lp = L[static_cast<std::size_t>(pivot)];
  const int pivot_count =
      static_cast<int>(std::floor((hi[pivot] - lo[pivot]) / resolution + 1e-9)) + 1;

  double best_val = std::numeric_limits<double>::infinity();
  Vec best;
  Vec x(static_cast<std::size_t>(n));
  for (long k = 0; k < total; ++k) {
    long rem = k;
    double covered = 0.0, val = 0.0;
    for (std::size_t f = 0; f < free_idx.size(); ++f) {
      const int i = free_idx[f];
      x[static_cast<std::size_t>(i)] = lo[i] + resolution * static_cast<double>(rem % counts[f]);
      rem /= counts[f];
      covered += a[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      val += L[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    int kp;
    if (Lp <= 0.0) {
      kp = pivot_count - 1;  // cost-free (or profitable) pivot goes to the top
    } else {
      const double need = (r - 1e-9 - covered) / ap;  // same slack tolerance as `feasible`
      kp = static_cast<int>(std::ceil((need - lo[pivot]) / resolution - 1e-9));
      kp = std::max(kp, 0);
      // guard the rounding in the closed-form index against float boundary cases
      while (kp < pivot_count &&
             covered + ap * (lo[pivot] + resolution * kp) < r - 1e-9) {
        ++kp;
      }
      if (kp >= pivot_count) continue;  // no feasible pivot value for this combination
    }
    const double xp = lo[pivot] + resolution * static_cast<double>(kp);
    if (covered + ap * xp < r - 1e-9) continue;
    const double v = val + Lp * xp;
    if (v < best_val) {
      best_val = v;
      best = x;
      best[static_cast<std::size_t>(pivot)] = xp;
    }
  }
  if (best.empty()) throw InfeasibleSet("grid_minimize: no feasible grid point");
  return {best_val, std::move(best)};
}

inline OfflineObjective cumulative_objective(const RunTrace& trace, int prefix = -1) {
  if (trace.cum_cost_coeffs.empty()) {
    throw std::invalid_argument("cumulative_objective: trace has no linear cost coefficients");
  }
  int T = prefix < 0 ? trace.horizon() : prefix;
  if (T < 1 || T > trace.horizon()) throw std::invalid_argument("cumulative_objective: bad prefix");
  return OfflineObjective::linear(trace.cum_cost_coeffs[static_cast<std::size_t>(T) - 1]);
}

inline double regret(const RunTrace& trace, const FeasibleSetSpec& fs, const ProxConfig& cfg = {}) {
  if (trace.rounds.empty()) throw std::invalid_argument("regret: empty trace");
  return trace.cum_cost.back() - hindsight_cost(cumulative_objective(trace), fs, cfg).value;
}

/// V(T') at prefix T' (defaults to the full horizon): || [sum g(x_t)+b_t]^+ ||.
inline double violation(const RunTrace& trace, int prefix = -1) {
  if (trace.rounds.empty()) throw std::invalid_argument("violation: empty trace");
  int T = prefix < 0 ? trace.horizon() : prefix;
  if (T < 1 || T > trace.horizon()) throw std::invalid_argument("violation: bad prefix");
  return norm2(positive_part(trace.cum_slack[static_cast<std::size_t>(T) - 1]));
}

struct CheckpointRegret {
  int t{0};
  double regret{0.0};
  Vec w;  // selected shift at this prefix
};

/// Perturbed regret at checkpoints: at each prefix the shift is re-selected and
/// the hindsight problem re-solved on the prefix cumulative objective.
inline std::vector<CheckpointRegret> checkpoint_regrets(const RunTrace& trace,
                                                        const ProblemSpec& spec, int every,
                                                        const ProxConfig& cfg = {}) {
  if (every < 1) throw std::invalid_argument("checkpoint_regrets: every must be >= 1");
  std::vector<CheckpointRegret> out;
  const std::size_t m = static_cast<std::size_t>(spec.num_constraints());
  Vec run_mean_num = zeros(m), bar = Vec(m, -std::numeric_limits<double>::infinity());
  Vec wnum = zeros(m), wden = zeros(m);
  for (int t = 1; t <= trace.horizon(); ++t) {
    const auto& r = trace.rounds[static_cast<std::size_t>(t) - 1];
    for (std::size_t j = 0; j < m; ++j) {
      run_mean_num[j] += r.b[j];
      bar[j] = std::max(bar[j], r.b[j]);
    }
    if (t >= 2) {
      const Vec& y_prev = trace.rounds[static_cast<std::size_t>(t) - 2].y;
      for (std::size_t j = 0; j < m; ++j) {
        wnum[j] += y_prev[j] * r.b[j];
        wden[j] += y_prev[j];
      }
    }
    if (t % every != 0 && t != trace.horizon()) continue;
    Vec w(m);
    for (std::size_t j = 0; j < m; ++j) {
      double u = run_mean_num[j] / static_cast<double>(t);
      double wj = wden[j] > 0.0 ? wnum[j] / wden[j] : u;
      w[j] = std::clamp(wj, u, bar[j]);
    }
    FeasibleSetSpec fs{spec.action_set, spec.constraints, w};
    double hc = hindsight_cost(cumulative_objective(trace, t), fs, cfg).value;
    out.push_back({t, trace.cum_cost[static_cast<std::size_t>(t) - 1] - hc, std::move(w)});
  }
  return out;
}

}  // namespace oco
