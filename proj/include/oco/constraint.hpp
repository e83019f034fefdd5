#pragma once

#include <functional>
#include <utility>

#include "oco/vec.hpp"

namespace oco {

/// Convex constraint map g : R^n -> R^m, used as g(x) + b_t <= 0.
class ConstraintMap {
 public:
  using ValueFn = std::function<Vec(const Vec&)>;
  using JacobianFn = std::function<Matrix(const Vec&)>;  // subgradient rows

  static ConstraintMap affine(Matrix A, Vec c) {
    if (A.rows != static_cast<int>(c.size())) throw std::invalid_argument("ConstraintMap::affine: A/c mismatch");
    ConstraintMap g;
    g.affine_ = true;
    g.m_ = A.rows;
    g.n_ = A.cols;
    g.A_ = std::move(A);
    g.c_ = std::move(c);
    return g;
  }

  static ConstraintMap general(int n, int m, ValueFn value, JacobianFn jacobian, double grad_lipschitz) {
    ConstraintMap g;
    g.affine_ = false;
    g.n_ = n;
    g.m_ = m;
    g.value_ = std::move(value);
    g.jacobian_ = std::move(jacobian);
    g.grad_lipschitz_ = grad_lipschitz;
    return g;
  }

  bool is_affine() const { return affine_; }
  int num_constraints() const { return m_; }
  int input_dimension() const { return n_; }
  const Matrix& matrix() const { return A_; }
  const Vec& offset() const { return c_; }

  Vec value(const Vec& x) const {
    if (affine_) {
      Vec r = A_.apply(x);
      for (int i = 0; i < m_; ++i) r[i] += c_[i];
      return r;
    }
    return value_(x);
  }

  Matrix jacobian(const Vec& x) const {
    if (affine_) return A_;
    return jacobian_(x);
  }

  // gradient of u -> <y, g(u)>
  Vec weighted_gradient(const Vec& x, const Vec& y) const {
    return jacobian(x).apply_transpose(y);
  }

  // Lipschitz constant of the gradient of u -> <y, g(u)>; zero for affine maps.
  double weighted_gradient_lipschitz(const Vec& y) const {
    if (affine_) return 0.0;
    return grad_lipschitz_ * norm2(y);
  }

 private:
  ConstraintMap() = default;

  bool affine_{true};
  int m_{0};
  int n_{0};
  Matrix A_;
  Vec c_;
  ValueFn value_;
  JacobianFn jacobian_;
  double grad_lipschitz_{0.0};
};

}  // namespace oco
