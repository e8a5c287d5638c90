// (k,k)-forms at a point over m complex coordinates, stored densely over
// ordered pairs of strictly increasing k-subsets of {0..m-1}.
//
// Coefficients are taken with respect to the basis
//   e_{I,J} = i^k (-1)^{k(k-1)/2} dz_I ^ dzbar_J,
// chosen so that conj(e_{I,J}) = e_{J,I}.  Real forms then have Hermitian
// coefficient tensors, and the wedge product needs only the two shuffle signs:
//   (alpha ^ beta)_{M,N} = sum eps(I,K) eps(J,L) alpha_{I,J} beta_{K,L}.
// The top-degree basis element e_{F,F} equals 2^m times Lebesgue measure.

#ifndef KODAIRA_FORMS_HPP
#define KODAIRA_FORMS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "kodaira/jets.hpp"

namespace kodaira {

namespace detail {

/// Lexicographically ordered k-subsets of {0..m-1} as bitmasks, with
/// mask -> index lookup.
struct SubsetTable {
  int m = 0, k = 0;
  std::vector<uint32_t> masks;
  std::map<uint32_t, int> index;

  static const SubsetTable& get(int m, int k) {
    static std::map<std::pair<int, int>, SubsetTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(m, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    SubsetTable t;
    t.m = m;
    t.k = k;
    std::vector<int> sel(k);
    // Generate k-subsets in lexicographic order of element lists.
    if (k == 0) {
      t.masks.push_back(0);
    } else {
      for (int i = 0; i < k; ++i) sel[i] = i;
      while (true) {
        uint32_t mask = 0;
        for (int i = 0; i < k; ++i) mask |= (1u << sel[i]);
        t.masks.push_back(mask);
        int i = k - 1;
        while (i >= 0 && sel[i] == m - k + i) --i;
        if (i < 0) break;
        ++sel[i];
        for (int j = i + 1; j < k; ++j) sel[j] = sel[j - 1] + 1;
      }
    }
    for (int i = 0; i < static_cast<int>(t.masks.size()); ++i) t.index[t.masks[i]] = i;
    return cache.emplace(key, std::move(t)).first->second;
  }
};

/// Sign of the shuffle sorting the concatenation (I, K) of disjoint subsets.
inline int shuffle_sign(uint32_t i_mask, uint32_t k_mask) {
  int inversions = 0;
  uint32_t k = k_mask;
  while (k) {
    const uint32_t bit = k & (~k + 1);
    // elements of I greater than this element of K
    inversions += __builtin_popcount(i_mask & ~(bit | (bit - 1)));
    k ^= bit;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace detail

class FormAtPoint {
 public:
  FormAtPoint() : m_(0), k_(0) {}

  FormAtPoint(int m, int k)
      : m_(m), k_(k) {
    const auto& t = detail::SubsetTable::get(m, k);
    const int n = static_cast<int>(t.masks.size());
    c_ = MatrixXcd::Zero(n, n);
  }

  static FormAtPoint scalar(int m, cxd v) {
    FormAtPoint f(m, 0);
    f.c_(0, 0) = v;
    return f;
  }

  /// (1,1)-form from an m x m coefficient matrix w.r.t. e_{a,b} = i dz_a ^ dzbar_b.
  static FormAtPoint one_one(const MatrixXcd& coeff) {
    FormAtPoint f(static_cast<int>(coeff.rows()), 1);
    f.c_ = coeff;
    return f;
  }

  int dim() const { return m_; }
  int degree() const { return k_; }
  const MatrixXcd& coeff() const { return c_; }
  MatrixXcd& coeff() { return c_; }

  /// Coefficient of the top-degree basis element (k = m).
  cxd top() const {
    if (k_ != m_) throw RejectedInput("FormAtPoint::top: not a top-degree form");
    return c_(0, 0);
  }

  double norm_inf() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0; }

  /// Real forms satisfy coefficient(J,I) = conj(coefficient(I,J)).
  bool is_real(double tol = 1e-12) const {
    return (c_ - c_.adjoint()).lpNorm<Eigen::Infinity>() <= tol;
  }

  FormAtPoint& operator+=(const FormAtPoint& o) {
    if (m_ != o.m_ || k_ != o.k_) throw RejectedInput("FormAtPoint: shape mismatch");
    c_ += o.c_;
    return *this;
  }
  FormAtPoint& operator-=(const FormAtPoint& o) {
    if (m_ != o.m_ || k_ != o.k_) throw RejectedInput("FormAtPoint: shape mismatch");
    c_ -= o.c_;
    return *this;
  }
  FormAtPoint& operator*=(cxd s) {
    c_ *= s;
    return *this;
  }

 private:
  int m_, k_;
  MatrixXcd c_;
};

inline FormAtPoint operator+(FormAtPoint a, const FormAtPoint& b) { return a += b; }
inline FormAtPoint operator-(FormAtPoint a, const FormAtPoint& b) { return a -= b; }
inline FormAtPoint operator*(FormAtPoint a, cxd s) { return a *= s; }
inline FormAtPoint operator*(cxd s, FormAtPoint a) { return a *= s; }

inline FormAtPoint wedge(const FormAtPoint& a, const FormAtPoint& b) {
  if (a.dim() != b.dim()) throw RejectedInput("wedge: dimension mismatch");
  const int m = a.dim();
  const int k = a.degree(), l = b.degree();
  if (k + l > m) throw RejectedInput("wedge: total bidegree exceeds (m,m)");
  const auto& ta = detail::SubsetTable::get(m, k);
  const auto& tb = detail::SubsetTable::get(m, l);
  const auto& tr = detail::SubsetTable::get(m, k + l);
  FormAtPoint r(m, k + l);
  for (int ia = 0; ia < static_cast<int>(ta.masks.size()); ++ia) {
    for (int ja = 0; ja < static_cast<int>(ta.masks.size()); ++ja) {
      const cxd ca = a.coeff()(ia, ja);
      if (ca == cxd(0.0, 0.0)) continue;
      for (int ib = 0; ib < static_cast<int>(tb.masks.size()); ++ib) {
        const uint32_t mi = ta.masks[ia], mk = tb.masks[ib];
        if (mi & mk) continue;
        const int s1 = detail::shuffle_sign(mi, mk);
        const int row = tr.index.at(mi | mk);
        for (int jb = 0; jb < static_cast<int>(tb.masks.size()); ++jb) {
          const uint32_t mj = ta.masks[ja], ml = tb.masks[jb];
          if (mj & ml) continue;
          const int s2 = detail::shuffle_sign(mj, ml);
          const int col = tr.index.at(mj | ml);
          r.coeff()(row, col) += static_cast<double>(s1 * s2) * ca * b.coeff()(ib, jb);
        }
      }
    }
  }
  return r;
}

/// alpha^k by repeated wedge; k = 0 gives the scalar 1.
inline FormAtPoint wedge_power(const FormAtPoint& a, int k) {
  FormAtPoint r = FormAtPoint::scalar(a.dim(), 1.0);
  for (int i = 0; i < k; ++i) r = wedge(r, a);
  return r;
}

// ---------------------------------------------------------------------------
// r x r matrices of (1,1)-forms at a base point (curvature matrices).
// ---------------------------------------------------------------------------

class MatrixOfForms {
 public:
  MatrixOfForms() : r_(0), m_(0) {}
  MatrixOfForms(int r, int m) : r_(r), m_(m), e_(r * r, FormAtPoint(m, 1)) {}

  int rank() const { return r_; }
  int dim() const { return m_; }
  const FormAtPoint& entry(int j, int k) const { return e_[j * r_ + k]; }
  FormAtPoint& entry(int j, int k) { return e_[j * r_ + k]; }

  FormAtPoint trace() const {
    FormAtPoint t(m_, 1);
    for (int j = 0; j < r_; ++j) t += entry(j, j);
    return t;
  }

  /// Conjugate-transpose partner symmetry of a curvature matrix in a frame
  /// that is orthonormal at the point.
  bool is_hermitian(double tol = 1e-12) const {
    for (int j = 0; j < r_; ++j)
      for (int k = 0; k < r_; ++k) {
        const MatrixXcd diff = entry(j, k).coeff() - entry(k, j).coeff().adjoint();
        if (diff.lpNorm<Eigen::Infinity>() > tol) return false;
      }
    return true;
  }

 private:
  int r_, m_;
  std::vector<FormAtPoint> e_;
};

}  // namespace kodaira

#endif
