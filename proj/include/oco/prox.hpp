#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "oco/problem.hpp"

namespace oco {

struct ProxConfig {
  double inner_tol{1e-10};    // on the subproblem gradient-mapping norm
  int inner_max_iters{10000};

  void validate() const {
    if (!(inner_tol > 0.0)) throw std::invalid_argument("ProxConfig: inner_tol must be > 0");
    if (inner_max_iters < 1) throw std::invalid_argument("ProxConfig: inner_max_iters must be >= 1");
  }
};

struct ConvergenceFailure : std::runtime_error {
  double grad_mapping_norm;
  explicit ConvergenceFailure(double gm)
      : std::runtime_error("prox inner solver did not reach tolerance; gradient-mapping norm " +
                           std::to_string(gm)),
        grad_mapping_norm(gm) {}
};

namespace detail {

struct PgResult {
  Vec u;
  double gm_norm{0.0};
  bool converged{false};
};

// Projected gradient with fixed step 1/lips; grad_fn must be the exact
// gradient, lips the smoothness of the full objective. Stops on the gradient
// mapping at step 1/lips; always returns the last iterate so callers that
// continue (warm starts) keep the progress of an unconverged stage.
template <typename GradFn, typename ProjectFn>
PgResult pg_iterate(Vec u, const GradFn& grad_fn, const ProjectFn& project, double lips,
                    const ProxConfig& cfg) {
  const double step = 1.0 / lips;
  PgResult res;
  for (int it = 0; it <= cfg.inner_max_iters; ++it) {
    Vec g = grad_fn(u);
    Vec trial = u;
    axpy(trial, -step, g);
    Vec next = project(trial);
    res.gm_norm = norm2(sub(u, next)) / step;
    u = std::move(next);
    if (res.gm_norm <= cfg.inner_tol) {
      res.converged = true;
      break;
    }
  }
  res.u = std::move(u);
  return res;
}

template <typename GradFn, typename ProjectFn>
Vec projected_gradient(Vec u, const GradFn& grad_fn, const ProjectFn& project, double lips,
                       const ProxConfig& cfg) {
  PgResult res = pg_iterate(std::move(u), grad_fn, project, lips, cfg);
  if (!res.converged) throw ConvergenceFailure(res.gm_norm);
  return std::move(res.u);
}

}  // namespace detail

/// argmin over u in C of <f_grad, u> + <y, g(u)> + (1/rho) B_psi(u, x).
/// The perturbation b_t does not appear: it shifts the objective by a constant.
inline Vec primal_step(const ProblemSpec& spec, const Vec& x, const Vec& y, const Vec& f_grad,
                       double rho, const ProxConfig& cfg = {}) {
  cfg.validate();
  if (!(rho > 0.0)) throw std::invalid_argument("primal_step: rho must be > 0");
  check_same_dim(x, f_grad, "primal_step");
  if (static_cast<int>(y.size()) != spec.num_constraints()) {
    throw std::invalid_argument("primal_step: dual dimension mismatch");
  }

  if (spec.constraints.is_affine() && spec.psi.kind() == BregmanGenerator::Kind::HalfSqEuclidean) {
    // P_C(x - rho (f_grad + A^T y))
    Vec dir = spec.constraints.matrix().apply_transpose(y);
    axpy(dir, 1.0, f_grad);
    Vec p = x;
    axpy(p, -rho, dir);
    return spec.action_set.project(p);
  }

  const double lips = spec.psi.smoothness() / rho + spec.constraints.weighted_gradient_lipschitz(y);
  Vec grad_psi_x = spec.psi.gradient(x);
  auto grad = [&](const Vec& u) {
    Vec g = spec.constraints.weighted_gradient(u, y);
    axpy(g, 1.0, f_grad);
    Vec gp = spec.psi.gradient(u);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += (gp[i] - grad_psi_x[i]) / rho;
    return g;
  };
  auto project = [&](const Vec& p) { return spec.action_set.project(p); };
  return detail::projected_gradient(x, grad, project, lips, cfg);
}

/// argmax over v >= 0 of <v, slack> - (1/rho) B_phi(v, y), slack = g(x_{t+1}) + b_{t+1}.
inline Vec dual_step(const ProblemSpec& spec, const Vec& y, const Vec& slack, double rho,
                     const ProxConfig& cfg = {}) {
  cfg.validate();
  if (!(rho > 0.0)) throw std::invalid_argument("dual_step: rho must be > 0");
  check_same_dim(y, slack, "dual_step");
  for (double v : y) {
    if (v < 0.0) throw std::invalid_argument("dual_step: y must be >= 0");
  }

  if (spec.phi.kind() == BregmanGenerator::Kind::HalfSqEuclidean) {
    Vec v = y;
    axpy(v, rho, slack);
    return positive_part(v);
  }

  // generic path: minimize -<v, slack> + (1/rho) B_phi(v, y) over the orthant
  const double lips = spec.phi.smoothness() / rho;
  Vec grad_phi_y = spec.phi.gradient(y);
  auto grad = [&](const Vec& v) {
    Vec g = spec.phi.gradient(v);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (g[i] - grad_phi_y[i]) / rho - slack[i];
    return g;
  };
  auto project = [](const Vec& p) { return positive_part(p); };
  return detail::projected_gradient(y, grad, project, lips, cfg);
}

}  // namespace oco
