#pragma once

// Small dense vector/matrix helpers. Everything here is desk-scale (n, m in
// the tens at most), so plain std::vector<double> beats pulling in a matrix
// library. All loops accumulate in a fixed order: outputs are deterministic.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace conekit {

using Vec = std::vector<double>;

// Dense row-major matrix.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

inline double dot(const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec add(const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec scaled(const Vec& x, double a) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

// y += a*x
inline void axpy(double a, const Vec& x, Vec& y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// A * x
inline Vec matvec(const Mat& A, const Vec& x) {
  assert(static_cast<int>(x.size()) == A.cols);
  Vec r(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

// A^T * x
inline Vec matTvec(const Mat& A, const Vec& x) {
  assert(static_cast<int>(x.size()) == A.rows);
  Vec r(A.cols, 0.0);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) r[j] += A(i, j) * x[i];
  return r;
}

// A * A^T (rows x rows), symmetric by construction.
inline Mat gram_rows(const Mat& A) {
  Mat G(A.rows, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < A.cols; ++k) s += A(i, k) * A(j, k);
      G(i, j) = s;
      G(j, i) = s;
    }
  return G;
}

inline double frob_norm(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += v * v;
  return std::sqrt(s);
}

}  // namespace conekit
