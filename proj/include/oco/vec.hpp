#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oco {

using Vec = std::vector<double>;

inline void check_same_dim(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

inline bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double sum(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s;
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline Vec add(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "add");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "sub");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// r += s * a
inline void axpy(Vec& r, double s, const Vec& a) {
  check_same_dim(r, a, "axpy");
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
}

inline Vec positive_part(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] > 0.0 ? a[i] : 0.0;
  return r;
}

inline bool elementwise_leq(const Vec& a, const Vec& b, double tol = 0.0) {
  check_same_dim(a, b, "elementwise_leq");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return false;
  }
  return true;
}

// Dense row-major matrix, sized for the small constraint systems used here.
struct Matrix {
  int rows{0};
  int cols{0};
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  Vec apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    Vec r(static_cast<std::size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols; ++j) s += (*this)(i, j) * x[j];
      r[i] = s;
    }
    return r;
  }

  Vec apply_transpose(const Vec& y) const {
    if (static_cast<int>(y.size()) != rows) throw std::invalid_argument("Matrix::apply_transpose: dimension mismatch");
    Vec r(static_cast<std::size_t>(cols), 0.0);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) r[j] += (*this)(i, j) * y[i];
    }
    return r;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
  }
};

}  // namespace oco
