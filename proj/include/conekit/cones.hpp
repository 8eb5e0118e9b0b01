#pragma once

// Closed convex cones with Euclidean projections and their Moreau polars.
//
// Every z in R^d splits as z = P_K(z) + P_polar(z) with <P_K(z), P_polar(z)> = 0,
// where the polar K* = { w : <w,d> <= 0 for all d in K }. The polar projection
// is computed exclusively as the Moreau complement z - P_K(z); it is never an
// independent formula, which makes dist(z,K) = ||P_polar(z)|| and keeps the
// two projections consistent to the last bit.
//
// Supported cones: Zero {0}^d, Nonpos (-R_+)^d, Lorentz {z : z_1 >= ||z_2..d||}
// (Lorentz(1) is the half-line x_1 >= 0), Psd (s x s symmetric positive
// semidefinite matrices in svec coordinates), and finite Products of these.
//
// svec convention: column-major lower triangle with off-diagonal entries
// scaled by sqrt(2), so <svec(A), svec(B)> = trace(A B).

#include <string>
#include <vector>

#include "conekit/linalg.hpp"

namespace conekit {

enum class ConeKind { Zero, Nonpos, Lorentz, Psd, Product };

class Cone {
 public:
  static Cone zero(int d);
  static Cone nonpos(int d);
  static Cone lorentz(int d);
  static Cone psd(int order);  // embedded dimension order*(order+1)/2
  static Cone product(std::vector<Cone> parts);

  ConeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int order() const { return order_; }
  const std::vector<Cone>& parts() const { return parts_; }

  // True when the cone is Zero or a Product built only from Zero blocks,
  // i.e. the constraint h(x) in K is a pure equality system.
  bool is_pure_zero() const;

  std::string describe() const;

 private:
  Cone() = default;
  ConeKind kind_ = ConeKind::Zero;
  int dim_ = 0;
  int order_ = 0;
  std::vector<Cone> parts_;
};

// ----------------------------------------------------------- symmetric svec

inline int svec_dim(int order) { return order * (order + 1) / 2; }

// Symmetric matrix stored in svec coordinates.
struct SymMatrix {
  int order = 0;
  Vec v;  // length svec_dim(order)

  SymMatrix() = default;
  explicit SymMatrix(int s) : order(s), v(svec_dim(s), 0.0) {}
};

SymMatrix svec_from_dense(const Mat& a);
Mat svec_to_dense(const SymMatrix& s);

// <svec(A), svec(B)> = trace(A B); plain dot product in svec coordinates.
double trace_inner(const SymMatrix& a, const SymMatrix& b);

// --------------------------------------------------------- symmetric eigen

struct EigenPair {
  Vec eigenvalues;  // sorted descending
  Mat q;            // columns are the matching eigenvectors
};

// Cyclic Jacobi rotations; stops when the largest off-diagonal entry falls
// below 1e-12 * ||A||_F. Throws std::runtime_error if 30*s^2 sweeps do not
// converge (does not happen for symmetric input; the cap guards NaN abuse).
EigenPair eigen_sym(const SymMatrix& a);

// ---------------------------------------------------------------- projection

// Euclidean projection of z onto K.
Vec project(const Cone& k, const Vec& z);

// Moreau complement z - project(k, z); equals the projection onto the polar.
Vec project_polar(const Cone& k, const Vec& z);

// dist(z, K) = ||project_polar(k, z)||.
double dist_to_cone(const Cone& k, const Vec& z);

bool membership(const Cone& k, const Vec& z, double tol);

// Decomposition diagnostics for one point.
struct MoreauCheck {
  double recon;  // ||project + project_polar - z||; identically 0 by construction
  double orth;   // |<project, project_polar>|
};
MoreauCheck moreau_check(const Cone& k, const Vec& z);

// Squared distance to the cone through the polar projection:
// value = ||P_polar(hx)||^2.
double penalty_value(const Cone& k, const Vec& hx);

// Chain rule for the squared distance composed with h: returns
// Jh^T * (2 * P_polar(hx)), the gradient of x -> ||P_polar(h(x))||^2.
Vec penalty_grad_chain(const Cone& k, const Vec& hx, const Mat& jh);

}  // namespace conekit
