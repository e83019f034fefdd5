#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "oco/prox.hpp"
#include "oco/stream.hpp"
#include "oco/trace.hpp"

namespace oco {

/// State of the primal-dual engine between rounds. At t = 1, y = 0 and
/// last_f_grad = 0 (the cost of round 1 is not used by the first primal update).
struct AlgoState {
  int t{1};
  Vec x;
  Vec y;
  double rho{1.0};
  Vec last_f_grad;

  static AlgoState initial(const ProblemSpec& spec, Vec x1) {
    AlgoState s;
    s.t = 1;
    s.x = std::move(x1);
    s.y = zeros(spec.num_constraints());
    s.rho = 1.0;
    s.last_f_grad = zeros(spec.dimension());
    return s;
  }
};

/// Data revealed after playing x_{t+1}: cost value and subgradient at the
/// played point, and the perturbation of the new round.
struct RoundFeedback {
  double f_value{0.0};
  Vec f_grad;
  Vec b;
};

inline double step_rate(long t, double epsilon) {
  if (t < 1) throw std::invalid_argument("step_rate: t must be >= 1");
  if (!(epsilon >= 0.0) || epsilon >= 1.0) throw std::invalid_argument("step_rate: epsilon must be in [0,1)");
  return std::pow(static_cast<double>(t), -epsilon);
}

/// The primal decision the engine will play next: argmin of the Lagrangian
/// proximal subproblem at the current state.
inline Vec next_action(const ProblemSpec& spec, const AlgoState& state, double rho,
                       const ProxConfig& cfg = {}) {
  return primal_step(spec, state.x, state.y, state.last_f_grad, rho, cfg);
}

/// One iteration: both updates at rate rho, feedback evaluated at the new point.
inline AlgoState advance(const ProblemSpec& spec, const AlgoState& state, double rho,
                         const RoundFeedback& feedback, const ProxConfig& cfg = {}) {
  AlgoState next;
  next.t = state.t + 1;
  next.x = next_action(spec, state, rho, cfg);
  Vec slack = add(spec.constraints.value(next.x), feedback.b);
  next.y = dual_step(spec, state.y, slack, rho, cfg);
  next.rho = rho;
  next.last_f_grad = feedback.f_grad;
  return next;
}

namespace detail {

using RateFn = std::function<double(int)>;

// Shared loop for all engines. `dual_enabled=false` freezes y at 0 and uses the
// plain Euclidean projected step (the OGD baseline).
inline RunTrace run_loop(const ProblemSpec& spec, ScenarioStream& stream, const RateFn& rate,
                         int T, const ProxConfig& cfg, bool dual_enabled, const Vec* x1_override) {
  if (T < 1) throw std::invalid_argument("run: T must be >= 1");
  Vec x1 = x1_override ? *x1_override : spec.action_set.project(zeros(spec.dimension()));
  if (!spec.action_set.contains(x1, 1e-9)) throw std::invalid_argument("run: x1 not in C");

  AlgoState state = AlgoState::initial(spec, x1);
  RunTrace trace;

  stream.observe_action(1, state.x);
  RoundRecord rec;
  rec.t = 1;
  rec.x = state.x;
  rec.y = state.y;
  rec.rho = rate(1);
  rec.f_value = stream.cost_value(1, state.x);
  rec.b = stream.perturbation(1);
  rec.g_x = spec.constraints.value(state.x);
  if (auto lc = stream.linear_cost_coefficients(1)) rec.cost_coeffs = *lc;
  trace.push(std::move(rec));

  for (int t = 1; t < T; ++t) {
    const double rho = rate(t);
    Vec x_next;
    if (dual_enabled) {
      x_next = next_action(spec, state, rho, cfg);
    } else {
      Vec p = state.x;
      axpy(p, -rho, state.last_f_grad);
      x_next = spec.action_set.project(p);
    }

    stream.observe_action(t + 1, x_next);
    RoundFeedback fb;
    fb.f_value = stream.cost_value(t + 1, x_next);
    fb.f_grad = stream.cost_subgradient(t + 1, x_next);
    fb.b = stream.perturbation(t + 1);

    AlgoState next;
    next.t = t + 1;
    next.x = std::move(x_next);
    next.rho = rho;
    if (dual_enabled) {
      Vec slack = add(spec.constraints.value(next.x), fb.b);
      next.y = dual_step(spec, state.y, slack, rho, cfg);
    } else {
      next.y = state.y;  // identically zero
    }
    next.last_f_grad = fb.f_grad;
    state = std::move(next);

    RoundRecord r;
    r.t = t + 1;
    r.x = state.x;
    r.y = state.y;
    r.rho = rate(t + 1);
    r.f_value = fb.f_value;
    r.b = fb.b;
    r.g_x = spec.constraints.value(state.x);
    if (auto lc = stream.linear_cost_coefficients(t + 1)) r.cost_coeffs = *lc;
    trace.push(std::move(r));
  }
  return trace;
}

}  // namespace detail

/// Adaptive-rate primal-dual run, rho_t = t^{-epsilon}.
inline RunTrace run(const ProblemSpec& spec, ScenarioStream& stream, double epsilon, int T,
                    const ProxConfig& cfg = {}, const Vec* x1 = nullptr) {
  if (!(epsilon >= 0.0) || epsilon >= 1.0) throw std::invalid_argument("run: epsilon must be in [0,1)");
  return detail::run_loop(
      spec, stream, [epsilon](int t) { return step_rate(t, epsilon); }, T, cfg, true, x1);
}

/// OGD baseline: x_{t+1} = P_C(x_t - alpha_t f'_t(x_t)), duals identically zero.
/// Default rate alpha_t = 1/sqrt(t); pass a rate to match another engine's rho_t.
inline RunTrace run_ogd(const ProblemSpec& spec, ScenarioStream& stream, int T,
                        const detail::RateFn& rate = {}, const Vec* x1 = nullptr) {
  detail::RateFn r = rate ? rate : [](int t) { return 1.0 / std::sqrt(static_cast<double>(t)); };
  return detail::run_loop(spec, stream, r, T, ProxConfig{}, false, x1);
}

/// Horizon-dependent baseline with constant rate 1/sqrt(T).
inline RunTrace run_fixed_rate(const ProblemSpec& spec, ScenarioStream& stream, int T,
                               const ProxConfig& cfg = {}, const Vec* x1 = nullptr) {
  if (T < 1) throw std::invalid_argument("run_fixed_rate: T must be >= 1");
  const double rho = 1.0 / std::sqrt(static_cast<double>(T));
  return detail::run_loop(spec, stream, [rho](int) { return rho; }, T, cfg, true, x1);
}

struct StaticRunResult {
  Vec x_bar;
  RunTrace trace;
};

/// Static optimization mode: constant cost and perturbation, rho_t = alpha t^{-epsilon},
/// output is the primal average.
inline StaticRunResult run_static_averaged(const ProblemSpec& spec, ScenarioStream& stream,
                                           double alpha, double epsilon, int T,
                                           const ProxConfig& cfg = {}, const Vec* x1 = nullptr) {
  if (!(alpha > 0.0)) throw std::invalid_argument("run_static_averaged: alpha must be > 0");
  if (!(epsilon >= 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("run_static_averaged: epsilon must be in [0,1)");
  }
  RunTrace trace = detail::run_loop(
      spec, stream, [alpha, epsilon](int t) { return alpha * step_rate(t, epsilon); }, T, cfg, true,
      x1);
  Vec x_bar = zeros(spec.dimension());
  for (const auto& r : trace.rounds) axpy(x_bar, 1.0, r.x);
  x_bar = scaled(x_bar, 1.0 / static_cast<double>(T));
  return {std::move(x_bar), std::move(trace)};
}

}  // namespace oco
