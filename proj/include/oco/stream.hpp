#pragma once

#include <optional>

#include "oco/problem.hpp"

namespace oco {

/// Per-round data source for an engine. Rounds are visited in order t = 1, 2, ...
/// The engine calls observe_action(t, x_t) when x_t is played; cost data for
/// round t may only be queried after that call, so decisions cannot peek ahead.
class ScenarioStream {
 public:
  virtual ~ScenarioStream() = default;

  virtual const ProblemSpec& problem() const = 0;

  /// Reveal the played action for round t (feedback channel).
  virtual void observe_action(int t, const Vec& x) = 0;

  virtual double cost_value(int t, const Vec& x) = 0;
  virtual Vec cost_subgradient(int t, const Vec& x) = 0;

  /// Perturbation b_t; enters the dual update only.
  virtual Vec perturbation(int t) = 0;

  /// Coefficients l_t when f_t(x) = <l_t, x>; empty optional otherwise.
  /// Lets offline evaluators rebuild the cumulative objective from a trace.
  virtual std::optional<Vec> linear_cost_coefficients(int t) { (void)t; return std::nullopt; }
};

}  // namespace oco
