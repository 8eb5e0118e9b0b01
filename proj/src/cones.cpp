#include "conekit/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace conekit {

namespace {

// Treat ||z2|| <= -z1 + kLorentzBranchTol as the project-to-zero branch so the
// closed form never divides by a vanishing ||z2||.
constexpr double kLorentzBranchTol = 1e-14;

void check_dim(const Cone& k, const Vec& z, const char* what) {
  if (static_cast<int>(z.size()) != k.dim())
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(z.size()) + ", cone expects " +
                                std::to_string(k.dim()));
}

}  // namespace

// ------------------------------------------------------------- construction

Cone Cone::zero(int d) {
  if (d < 1) throw std::invalid_argument("zero cone needs dimension >= 1");
  Cone c;
  c.kind_ = ConeKind::Zero;
  c.dim_ = d;
  return c;
}

Cone Cone::nonpos(int d) {
  if (d < 1) throw std::invalid_argument("nonpos cone needs dimension >= 1");
  Cone c;
  c.kind_ = ConeKind::Nonpos;
  c.dim_ = d;
  return c;
}

Cone Cone::lorentz(int d) {
  if (d < 1) throw std::invalid_argument("lorentz cone needs dimension >= 1");
  Cone c;
  c.kind_ = ConeKind::Lorentz;
  c.dim_ = d;
  return c;
}

Cone Cone::psd(int order) {
  if (order < 1) throw std::invalid_argument("psd cone needs order >= 1");
  Cone c;
  c.kind_ = ConeKind::Psd;
  c.dim_ = svec_dim(order);
  c.order_ = order;
  return c;
}

Cone Cone::product(std::vector<Cone> parts) {
  if (parts.empty()) throw std::invalid_argument("product cone needs at least one part");
  Cone c;
  c.kind_ = ConeKind::Product;
  c.parts_ = std::move(parts);
  c.dim_ = 0;
  for (const Cone& p : c.parts_) c.dim_ += p.dim();
  return c;
}

bool Cone::is_pure_zero() const {
  if (kind_ == ConeKind::Zero) return true;
  if (kind_ != ConeKind::Product) return false;
  for (const Cone& p : parts_)
    if (!p.is_pure_zero()) return false;
  return true;
}

std::string Cone::describe() const {
  switch (kind_) {
    case ConeKind::Zero: return "zero:" + std::to_string(dim_);
    case ConeKind::Nonpos: return "nonpos:" + std::to_string(dim_);
    case ConeKind::Lorentz: return "lorentz:" + std::to_string(dim_);
    case ConeKind::Psd: return "psd:" + std::to_string(order_);
    case ConeKind::Product: {
      std::string s = "product(";
      for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += parts_[i].describe();
      }
      return s + ")";
    }
  }
  return "?";
}

// ----------------------------------------------------------- symmetric svec

SymMatrix svec_from_dense(const Mat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("svec_from_dense: matrix not square");
  const double sqrt2 = std::sqrt(2.0);
  SymMatrix s(a.rows);
  int idx = 0;
  for (int col = 0; col < a.cols; ++col)
    for (int row = col; row < a.rows; ++row)
      s.v[idx++] = row == col ? a(row, col) : a(row, col) * sqrt2;
  return s;
}

Mat svec_to_dense(const SymMatrix& s) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Mat a(s.order, s.order);
  int idx = 0;
  for (int col = 0; col < s.order; ++col)
    for (int row = col; row < s.order; ++row) {
      double v = row == col ? s.v[idx] : s.v[idx] * inv_sqrt2;
      a(row, col) = v;
      a(col, row) = v;
      ++idx;
    }
  return a;
}

double trace_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.order != b.order) throw std::invalid_argument("trace_inner: order mismatch");
  return dot(a.v, b.v);
}

// --------------------------------------------------------- symmetric eigen

EigenPair eigen_sym(const SymMatrix& s) {
  const int n = s.order;
  Mat a = svec_to_dense(s);
  Mat q(n, n);
  for (int i = 0; i < n; ++i) q(i, i) = 1.0;

  const double scale = frob_norm(a);
  const double threshold = 1e-12 * scale;
  const int max_sweeps = 30 * n * n;

  for (int sweep = 0; n > 1; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int r = p + 1; r < n; ++r) off = std::max(off, std::fabs(a(p, r)));
    if (off <= threshold) break;
    if (sweep >= max_sweeps)
      throw std::runtime_error("eigen_sym: Jacobi iteration did not converge");

    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        double apr = a(p, r);
        if (std::fabs(apr) <= threshold) continue;
        // Rotation that annihilates a(p,r).
        double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;

        double app = a(p, p), arr = a(r, r);
        a(p, p) = app - t * apr;
        a(r, r) = arr + t * apr;
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == p || j == r) continue;
          double ajp = a(j, p), ajr = a(j, r);
          a(j, p) = c * ajp - sn * ajr;
          a(p, j) = a(j, p);
          a(j, r) = sn * ajp + c * ajr;
          a(r, j) = a(j, r);
        }
        for (int j = 0; j < n; ++j) {
          double qjp = q(j, p), qjr = q(j, r);
          q(j, p) = c * qjp - sn * qjr;
          q(j, r) = sn * qjp + c * qjr;
        }
      }
    }
  }

  // Sort eigenvalues descending, carrying eigenvector columns along.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenPair out;
  out.eigenvalues.resize(n);
  out.q = Mat(n, n);
  for (int c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(perm[c], perm[c]);
    for (int r = 0; r < n; ++r) out.q(r, c) = q(r, perm[c]);
  }
  return out;
}

// ---------------------------------------------------------------- projection

namespace {

void project_into(const Cone& k, const double* z, double* out);

void project_lorentz(int d, const double* z, double* out) {
  double tail = 0.0;
  for (int i = 1; i < d; ++i) tail += z[i] * z[i];
  tail = std::sqrt(tail);
  if (tail <= z[0]) {
    for (int i = 0; i < d; ++i) out[i] = z[i];
    return;
  }
  if (tail <= -z[0] + kLorentzBranchTol) {
    for (int i = 0; i < d; ++i) out[i] = 0.0;
    return;
  }
  double c = 0.5 * (z[0] + tail);
  out[0] = c;
  for (int i = 1; i < d; ++i) out[i] = c * (z[i] / tail);
}

void project_psd(const Cone& k, const double* z, double* out) {
  SymMatrix s(k.order());
  std::copy(z, z + k.dim(), s.v.begin());
  EigenPair ep = eigen_sym(s);
  const int n = k.order();
  // Q * max(L, 0) * Q^T
  Mat rec(n, n);
  for (int c = 0; c < n; ++c) {
    double lam = std::max(ep.eigenvalues[c], 0.0);
    if (lam == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = lam * ep.q(i, c) * ep.q(j, c);
        rec(i, j) += v;
        if (i != j) rec(j, i) += v;
      }
  }
  SymMatrix p = svec_from_dense(rec);
  std::copy(p.v.begin(), p.v.end(), out);
}

void project_into(const Cone& k, const double* z, double* out) {
  switch (k.kind()) {
    case ConeKind::Zero:
      for (int i = 0; i < k.dim(); ++i) out[i] = 0.0;
      return;
    case ConeKind::Nonpos:
      for (int i = 0; i < k.dim(); ++i) out[i] = std::min(z[i], 0.0);
      return;
    case ConeKind::Lorentz:
      project_lorentz(k.dim(), z, out);
      return;
    case ConeKind::Psd:
      project_psd(k, z, out);
      return;
    case ConeKind::Product: {
      int off = 0;
      for (const Cone& p : k.parts()) {
        project_into(p, z + off, out + off);
        off += p.dim();
      }
      return;
    }
  }
}

}  // namespace

Vec project(const Cone& k, const Vec& z) {
  check_dim(k, z, "project");
  Vec out(z.size());
  project_into(k, z.data(), out.data());
  return out;
}

Vec project_polar(const Cone& k, const Vec& z) {
  check_dim(k, z, "project_polar");
  Vec p = project(k, z);
  Vec out(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[i] = z[i] - p[i];
  return out;
}

double dist_to_cone(const Cone& k, const Vec& z) { return norm2(project_polar(k, z)); }

bool membership(const Cone& k, const Vec& z, double tol) {
  return dist_to_cone(k, z) <= tol;
}

MoreauCheck moreau_check(const Cone& k, const Vec& z) {
  Vec p = project(k, z);
  Vec pp = project_polar(k, z);
  // recon compares project_polar against a freshly recomputed complement with
  // identical arithmetic: exactly zero iff project_polar is z - project.
  double recon = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    double r = pp[i] - (z[i] - p[i]);
    recon += r * r;
  }
  return MoreauCheck{std::sqrt(recon), std::fabs(dot(p, pp))};
}

double penalty_value(const Cone& k, const Vec& hx) {
  Vec w = project_polar(k, hx);
  return dot(w, w);
}

Vec penalty_grad_chain(const Cone& k, const Vec& hx, const Mat& jh) {
  check_dim(k, hx, "penalty_grad_chain");
  if (jh.rows != k.dim())
    throw std::invalid_argument("penalty_grad_chain: jacobian rows do not match cone dimension");
  Vec w = project_polar(k, hx);
  return matTvec(jh, scaled(w, 2.0));
}

}  // namespace conekit
