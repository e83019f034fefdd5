#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oco/vec.hpp"

namespace oco {

/// Convex action set with closed-form diameter and Euclidean projection.
class ActionSet {
 public:
  enum class Kind { Box, Ball, Simplex };

  static ActionSet box(Vec lo, Vec hi) {
    check_same_dim(lo, hi, "ActionSet::box");
    if (lo.empty()) throw std::invalid_argument("ActionSet::box: empty");
    if (!elementwise_leq(lo, hi)) throw std::invalid_argument("ActionSet::box: lo > hi");
    ActionSet s;
    s.kind_ = Kind::Box;
    s.n_ = static_cast<int>(lo.size());
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
  }

  static ActionSet unit_box(int n) { return box(Vec(n, 0.0), Vec(n, 1.0)); }

  static ActionSet euclidean_ball(Vec center, double radius) {
    if (center.empty()) throw std::invalid_argument("ActionSet::euclidean_ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("ActionSet::euclidean_ball: radius must be > 0");
    ActionSet s;
    s.kind_ = Kind::Ball;
    s.n_ = static_cast<int>(center.size());
    s.center_ = std::move(center);
    s.radius_ = radius;
    return s;
  }

  static ActionSet simplex(int n, double scale) {
    if (n < 1) throw std::invalid_argument("ActionSet::simplex: n < 1");
    if (!(scale > 0.0)) throw std::invalid_argument("ActionSet::simplex: scale must be > 0");
    ActionSet s;
    s.kind_ = Kind::Simplex;
    s.n_ = n;
    s.scale_ = scale;
    return s;
  }

  Kind kind() const { return kind_; }
  int dimension() const { return n_; }
  const Vec& lower() const { return lo_; }
  const Vec& upper() const { return hi_; }

  double diameter() const {
    switch (kind_) {
      case Kind::Box:
        return norm2(sub(hi_, lo_));
      case Kind::Ball:
        return 2.0 * radius_;
      case Kind::Simplex:
        // farthest vertices are scale * e_i, scale * e_j (or 0 distance when n = 1)
        return n_ > 1 ? scale_ * std::sqrt(2.0) : 0.0;
    }
    return 0.0;
  }

  Vec project(const Vec& p) const {
    if (static_cast<int>(p.size()) != n_) throw std::invalid_argument("ActionSet::project: dimension mismatch");
    if (!all_finite(p)) throw std::invalid_argument("ActionSet::project: non-finite input");
    switch (kind_) {
      case Kind::Box: {
        Vec r(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) r[i] = std::clamp(p[i], lo_[i], hi_[i]);
        return r;
      }
      case Kind::Ball: {
        Vec d = sub(p, center_);
        double nd = norm2(d);
        if (nd <= radius_) return p;
        return add(center_, scaled(d, radius_ / nd));
      }
      case Kind::Simplex:
        return project_simplex(p);
    }
    return p;
  }

  bool contains(const Vec& p, double tol = 1e-12) const {
    if (static_cast<int>(p.size()) != n_) return false;
    switch (kind_) {
      case Kind::Box:
        for (int i = 0; i < n_; ++i) {
          if (p[i] < lo_[i] - tol || p[i] > hi_[i] + tol) return false;
        }
        return true;
      case Kind::Ball:
        return norm2(sub(p, center_)) <= radius_ + tol;
      case Kind::Simplex: {
        for (double v : p) {
          if (v < -tol) return false;
        }
        return std::abs(sum(p) - scale_) <= tol * std::max(1.0, scale_);
      }
    }
    return false;
  }

 private:
  ActionSet() = default;

  // sort-based projection onto {x >= 0, sum x = scale}
  Vec project_simplex(const Vec& p) const {
    Vec u = p;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double theta = 0.0;
    int k = 0;
    for (int i = 0; i < n_; ++i) {
      css += u[i];
      double th = (css - scale_) / (i + 1);
      if (u[i] - th > 0.0) {
        k = i + 1;
        theta = th;
      }
    }
    (void)k;
    Vec r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = std::max(0.0, p[i] - theta);
    return r;
  }

  Kind kind_{Kind::Box};
  int n_{0};
  Vec lo_, hi_;      // box
  Vec center_;       // ball
  double radius_{0}; // ball
  double scale_{0};  // simplex
};

}  // namespace oco
