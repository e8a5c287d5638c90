// Mixed 2-jets over m complex coordinates: value, holomorphic and
// antiholomorphic first derivatives, and mixed second derivatives d_a dbar_b.
//
// This truncation is closed under products and under composition with scalar
// functions, which is all the curvature formula
//   R = H^{-1} dbar d H - H^{-1} dbar H ^ H^{-1} d H
// ever needs.  Pure d_a d_b and dbar_a dbar_b entries are deliberately absent.

#ifndef KODAIRA_JETS_HPP
#define KODAIRA_JETS_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "kodaira/errors.hpp"

namespace kodaira {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

class MixedJet2 {
 public:
  MixedJet2() : dim_(0), value_(0.0) {}

  explicit MixedJet2(int dim)
      : dim_(dim),
        value_(0.0),
        d_(VectorXcd::Zero(dim)),
        dbar_(VectorXcd::Zero(dim)),
        mixed_(MatrixXcd::Zero(dim, dim)) {}

  static MixedJet2 constant(int dim, cxd v) {
    MixedJet2 j(dim);
    j.value_ = v;
    return j;
  }

  /// Jet of the coordinate function z_a at the point where it takes value z.
  static MixedJet2 coordinate(int dim, int a, cxd z) {
    MixedJet2 j(dim);
    j.value_ = z;
    j.d_(a) = 1.0;
    return j;
  }

  /// Jet of conj(z_a).
  static MixedJet2 coordinate_conj(int dim, int a, cxd z) {
    MixedJet2 j(dim);
    j.value_ = std::conj(z);
    j.dbar_(a) = 1.0;
    return j;
  }

  int dim() const { return dim_; }
  cxd value() const { return value_; }
  const VectorXcd& d() const { return d_; }
  const VectorXcd& dbar() const { return dbar_; }
  const MatrixXcd& mixed() const { return mixed_; }
  VectorXcd& d() { return d_; }
  VectorXcd& dbar() { return dbar_; }
  MatrixXcd& mixed() { return mixed_; }
  void set_value(cxd v) { value_ = v; }

  /// A jet represents a real quantity when value is real, dbar = conj(d) and
  /// the mixed matrix is Hermitian.
  bool is_real(double tol = 1e-12) const {
    if (std::abs(value_.imag()) > tol) return false;
    if ((dbar_ - d_.conjugate()).lpNorm<Eigen::Infinity>() > tol) return false;
    return (mixed_ - mixed_.adjoint()).lpNorm<Eigen::Infinity>() <= tol;
  }

  MixedJet2& operator+=(const MixedJet2& o) {
    check_dim(o);
    value_ += o.value_;
    d_ += o.d_;
    dbar_ += o.dbar_;
    mixed_ += o.mixed_;
    return *this;
  }

  MixedJet2& operator-=(const MixedJet2& o) {
    check_dim(o);
    value_ -= o.value_;
    d_ -= o.d_;
    dbar_ -= o.dbar_;
    mixed_ -= o.mixed_;
    return *this;
  }

  MixedJet2& operator*=(cxd s) {
    value_ *= s;
    d_ *= s;
    dbar_ *= s;
    mixed_ *= s;
    return *this;
  }

  void check_dim(const MixedJet2& o) const {
    if (dim_ != o.dim_) throw RejectedInput("MixedJet2: dimension mismatch");
  }

 private:
  int dim_;
  cxd value_;
  VectorXcd d_, dbar_;
  MatrixXcd mixed_;
};

inline MixedJet2 operator+(MixedJet2 a, const MixedJet2& b) { return a += b; }
inline MixedJet2 operator-(MixedJet2 a, const MixedJet2& b) { return a -= b; }
inline MixedJet2 operator*(MixedJet2 a, cxd s) { return a *= s; }
inline MixedJet2 operator*(cxd s, MixedJet2 a) { return a *= s; }

/// Leibniz rule at the mixed-2-jet truncation.
inline MixedJet2 jet_mul(const MixedJet2& a, const MixedJet2& b) {
  a.check_dim(b);
  MixedJet2 r(a.dim());
  r.set_value(a.value() * b.value());
  r.d() = a.d() * b.value() + a.value() * b.d();
  r.dbar() = a.dbar() * b.value() + a.value() * b.dbar();
  r.mixed() = a.mixed() * b.value() + b.mixed() * a.value() +
              a.d() * b.dbar().transpose() + b.d() * a.dbar().transpose();
  return r;
}

inline MixedJet2 operator*(const MixedJet2& a, const MixedJet2& b) { return jet_mul(a, b); }

/// Complex conjugate of the represented quantity.
inline MixedJet2 jet_conj(const MixedJet2& a) {
  MixedJet2 r(a.dim());
  r.set_value(std::conj(a.value()));
  r.d() = a.dbar().conjugate();
  r.dbar() = a.d().conjugate();
  r.mixed() = a.mixed().adjoint();
  return r;
}

/// Value, first and second derivative of a scalar function at a point.
struct ScalarDerivs {
  cxd u0, u1, u2;
};

/// Chain rule: u must either be holomorphic or be a smooth function of a real
/// variable applied to a real-valued jet.
template <typename F>
MixedJet2 jet_compose(F&& u, const MixedJet2& f) {
  const ScalarDerivs s = u(f.value());
  MixedJet2 r(f.dim());
  r.set_value(s.u0);
  r.d() = s.u1 * f.d();
  r.dbar() = s.u1 * f.dbar();
  r.mixed() = s.u2 * f.d() * f.dbar().transpose() + s.u1 * f.mixed();
  return r;
}

inline MixedJet2 jet_log(const MixedJet2& f) {
  return jet_compose(
      [](cxd v) {
        if (v.real() <= 0.0 || std::abs(v.imag()) > 1e-9 * std::abs(v))
          throw SingularInput("jet_log: argument not a positive real");
        const double x = v.real();
        return ScalarDerivs{std::log(x), 1.0 / x, -1.0 / (x * x)};
      },
      f);
}

inline MixedJet2 jet_exp(const MixedJet2& f) {
  return jet_compose(
      [](cxd v) {
        const cxd e = std::exp(v);
        return ScalarDerivs{e, e, e};
      },
      f);
}

/// f^s for real exponent s; requires a positive real value.
inline MixedJet2 jet_pow(const MixedJet2& f, double s) {
  return jet_compose(
      [s](cxd v) {
        if (v.real() <= 0.0 || std::abs(v.imag()) > 1e-9 * std::abs(v))
          throw SingularInput("jet_pow: argument not a positive real");
        const double x = v.real();
        const double p = std::pow(x, s);
        return ScalarDerivs{p, s * p / x, s * (s - 1.0) * p / (x * x)};
      },
      f);
}

inline MixedJet2 jet_reciprocal(const MixedJet2& f) {
  return jet_compose(
      [](cxd v) {
        if (v == cxd(0.0, 0.0)) throw SingularInput("jet_reciprocal: zero value");
        const cxd i1 = 1.0 / v;
        return ScalarDerivs{i1, -i1 * i1, 2.0 * i1 * i1 * i1};
      },
      f);
}

// ---------------------------------------------------------------------------
// Matrix-valued jets.  Stored structure-of-arrays so matrix operations run on
// dense Eigen blocks.
// ---------------------------------------------------------------------------

class MatrixJet {
 public:
  MatrixJet() : rows_(0), dim_(0) {}

  MatrixJet(int rows, int dim)
      : rows_(rows),
        dim_(dim),
        value_(MatrixXcd::Zero(rows, rows)),
        d_(dim, MatrixXcd::Zero(rows, rows)),
        dbar_(dim, MatrixXcd::Zero(rows, rows)),
        mixed_(dim * dim, MatrixXcd::Zero(rows, rows)) {}

  static MatrixJet identity(int rows, int dim) {
    MatrixJet m(rows, dim);
    m.value_ = MatrixXcd::Identity(rows, rows);
    return m;
  }

  static MatrixJet from_scalar(const MixedJet2& j) {
    MatrixJet m(1, j.dim());
    m.set_entry(0, 0, j);
    return m;
  }

  int rows() const { return rows_; }
  int dim() const { return dim_; }
  const MatrixXcd& value() const { return value_; }
  MatrixXcd& value() { return value_; }
  const MatrixXcd& d(int a) const { return d_[a]; }
  MatrixXcd& d(int a) { return d_[a]; }
  const MatrixXcd& dbar(int a) const { return dbar_[a]; }
  MatrixXcd& dbar(int a) { return dbar_[a]; }
  const MatrixXcd& mixed(int a, int b) const { return mixed_[a * dim_ + b]; }
  MatrixXcd& mixed(int a, int b) { return mixed_[a * dim_ + b]; }

  MixedJet2 entry(int j, int k) const {
    MixedJet2 e(dim_);
    e.set_value(value_(j, k));
    for (int a = 0; a < dim_; ++a) {
      e.d()(a) = d_[a](j, k);
      e.dbar()(a) = dbar_[a](j, k);
      for (int b = 0; b < dim_; ++b) e.mixed()(a, b) = mixed(a, b)(j, k);
    }
    return e;
  }

  void set_entry(int j, int k, const MixedJet2& e) {
    value_(j, k) = e.value();
    for (int a = 0; a < dim_; ++a) {
      d_[a](j, k) = e.d()(a);
      dbar_[a](j, k) = e.dbar()(a);
      for (int b = 0; b < dim_; ++b) mixed(a, b)(j, k) = e.mixed()(a, b);
    }
  }

  /// Entrywise Hermitian at the value level and compatibly at jet level:
  /// M = M^dagger, d_a M = (dbar_a M)^dagger, mixed_ab = (mixed_ba)^dagger.
  bool is_hermitian(double tol = 1e-12) const {
    if ((value_ - value_.adjoint()).lpNorm<Eigen::Infinity>() > tol) return false;
    for (int a = 0; a < dim_; ++a)
      if ((d_[a] - dbar_[a].adjoint()).lpNorm<Eigen::Infinity>() > tol) return false;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b)
        if ((mixed(a, b) - mixed(b, a).adjoint()).lpNorm<Eigen::Infinity>() > tol)
          return false;
    return true;
  }

  MatrixJet transpose() const {
    MatrixJet t(rows_, dim_);
    t.value_ = value_.transpose();
    for (int a = 0; a < dim_; ++a) {
      t.d_[a] = d_[a].transpose();
      t.dbar_[a] = dbar_[a].transpose();
    }
    for (int a = 0; a < dim_ * dim_; ++a) t.mixed_[a] = mixed_[a].transpose();
    return t;
  }

  MatrixJet& operator+=(const MatrixJet& o) {
    value_ += o.value_;
    for (int a = 0; a < dim_; ++a) {
      d_[a] += o.d_[a];
      dbar_[a] += o.dbar_[a];
    }
    for (int a = 0; a < dim_ * dim_; ++a) mixed_[a] += o.mixed_[a];
    return *this;
  }

  MatrixJet& operator*=(cxd s) {
    value_ *= s;
    for (int a = 0; a < dim_; ++a) {
      d_[a] *= s;
      dbar_[a] *= s;
    }
    for (int a = 0; a < dim_ * dim_; ++a) mixed_[a] *= s;
    return *this;
  }

 private:
  int rows_, dim_;
  MatrixXcd value_;
  std::vector<MatrixXcd> d_, dbar_, mixed_;
};

inline MatrixJet operator+(MatrixJet a, const MatrixJet& b) { return a += b; }

/// Leibniz product of matrix jets.
inline MatrixJet matrix_jet_mul(const MatrixJet& a, const MatrixJet& b) {
  if (a.dim() != b.dim() || a.rows() != b.rows())
    throw RejectedInput("matrix_jet_mul: shape mismatch");
  const int m = a.dim();
  MatrixJet r(a.rows(), m);
  r.value() = a.value() * b.value();
  for (int c = 0; c < m; ++c) {
    r.d(c) = a.d(c) * b.value() + a.value() * b.d(c);
    r.dbar(c) = a.dbar(c) * b.value() + a.value() * b.dbar(c);
  }
  for (int c = 0; c < m; ++c)
    for (int e = 0; e < m; ++e)
      r.mixed(c, e) = a.mixed(c, e) * b.value() + a.d(c) * b.dbar(e) +
                      a.dbar(e) * b.d(c) + a.value() * b.mixed(c, e);
  return r;
}

inline MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
  return matrix_jet_mul(a, b);
}

/// Jet of H^{-1}.  First derivatives via -H^{-1}(dH)H^{-1}; mixed second
/// derivatives carry the two extra first-order terms.
inline MatrixJet matrix_jet_inverse(const MatrixJet& h, double rcond_min = 1e-12) {
  const int m = h.dim();
  const int r = h.rows();
  Eigen::PartialPivLU<MatrixXcd> lu(h.value());
  const MatrixXcd v = lu.inverse();
  // Reciprocal condition estimate from infinity norms.
  const double n1 = h.value().cwiseAbs().rowwise().sum().maxCoeff();
  const double n2 = v.cwiseAbs().rowwise().sum().maxCoeff();
  const double rcond = 1.0 / (n1 * n2);
  if (!std::isfinite(rcond) || rcond < rcond_min)
    throw ConditioningError("matrix_jet_inverse: value part near-singular", rcond);

  MatrixJet g(r, m);
  g.value() = v;
  std::vector<MatrixXcd> vd(m), vdb(m);
  for (int a = 0; a < m; ++a) {
    vd[a] = v * h.d(a) * v;     // = -d_a(H^{-1}) up to sign
    vdb[a] = v * h.dbar(a) * v;
    g.d(a) = -vd[a];
    g.dbar(a) = -vdb[a];
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      g.mixed(a, b) = -v * h.mixed(a, b) * v + vd[a] * h.dbar(b) * v + vdb[b] * h.d(a) * v;
  return g;
}

}  // namespace kodaira

#endif
