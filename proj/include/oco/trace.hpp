#pragma once

#include <vector>

#include "oco/vec.hpp"

namespace oco {

struct RoundRecord {
  int t{0};
  Vec x;
  Vec y;
  double rho{0.0};    // rate used by the updates at iteration t
  double f_value{0.0};
  Vec b;
  Vec g_x;            // g(x_t), without the perturbation
  Vec cost_coeffs;    // l_t for linear costs; empty otherwise
};

/// Complete run history plus running cumulatives, the input to every metric
/// and hindsight evaluator.
struct RunTrace {
  std::vector<RoundRecord> rounds;
  std::vector<double> cum_cost;        // prefix sums of f_t(x_t)
  std::vector<Vec> cum_slack;          // prefix sums of g(x_t) + b_t
  std::vector<Vec> cum_cost_coeffs;    // prefix sums of l_t (linear costs only)

  int horizon() const { return static_cast<int>(rounds.size()); }

  void push(RoundRecord rec) {
    Vec slack = add(rec.g_x, rec.b);
    if (rounds.empty()) {
      cum_cost.push_back(rec.f_value);
      cum_slack.push_back(slack);
      if (!rec.cost_coeffs.empty()) cum_cost_coeffs.push_back(rec.cost_coeffs);
    } else {
      cum_cost.push_back(cum_cost.back() + rec.f_value);
      cum_slack.push_back(add(cum_slack.back(), slack));
      if (!rec.cost_coeffs.empty()) cum_cost_coeffs.push_back(add(cum_cost_coeffs.back(), rec.cost_coeffs));
    }
    rounds.push_back(std::move(rec));
  }
};

}  // namespace oco
