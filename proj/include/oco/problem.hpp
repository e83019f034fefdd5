#pragma once

#include <utility>

#include "oco/action_set.hpp"
#include "oco/bregman.hpp"
#include "oco/constraint.hpp"

namespace oco {

/// Scenario-declared constants: diameter of C, subgradient/slack bounds and the
/// Slater margin. Declared analytically per scenario, never estimated from runs.
struct AssumptionConstants {
  double D{0.0};        // diameter of C
  double F_star{0.0};   // bound on ||f'_t(x)||
  double G_star{0.0};   // bound on ||g(x)+b_t|| (dual norm); 0 allowed in the all-feasible reduction
  double G{0.0};        // bound on ||g(x)+b_t||
  double eta{0.0};      // Slater margin
  Vec slater_point;

  void validate() const {
    if (!(D > 0.0)) throw std::invalid_argument("AssumptionConstants: D must be > 0");
    if (!(F_star > 0.0)) throw std::invalid_argument("AssumptionConstants: F_star must be > 0");
    if (G_star < 0.0) throw std::invalid_argument("AssumptionConstants: G_star must be >= 0");
    if (!(G > 0.0)) throw std::invalid_argument("AssumptionConstants: G must be > 0");
    if (!(eta > 0.0)) throw std::invalid_argument("AssumptionConstants: eta must be > 0");
  }
};

struct ProblemSpec {
  ActionSet action_set;
  ConstraintMap constraints;
  BregmanGenerator psi;  // primal generator
  BregmanGenerator phi;  // dual generator
  AssumptionConstants consts;

  ProblemSpec(ActionSet set, ConstraintMap g, BregmanGenerator psi_gen, BregmanGenerator phi_gen,
              AssumptionConstants c)
      : action_set(std::move(set)),
        constraints(std::move(g)),
        psi(std::move(psi_gen)),
        phi(std::move(phi_gen)),
        consts(std::move(c)) {
    if (constraints.input_dimension() != action_set.dimension()) {
      throw std::invalid_argument("ProblemSpec: constraint/action-set dimension mismatch");
    }
    consts.validate();
    if (static_cast<int>(consts.slater_point.size()) != action_set.dimension()) {
      throw std::invalid_argument("ProblemSpec: slater point dimension mismatch");
    }
    if (!action_set.contains(consts.slater_point, 1e-9)) {
      throw std::invalid_argument("ProblemSpec: slater point not in C");
    }
  }

  int dimension() const { return action_set.dimension(); }
  int num_constraints() const { return constraints.num_constraints(); }
};

}  // namespace oco
