// Chart-level geometry of the universal bundle on G(r,m): the frame metrics
//   K(W) = I + Z Z*            (universal bundle T)
//   H(W) = (K^{-1})^T = (I + Zbar Z^T)^{-1}   (dual bundle T*)
// around a base plane W_0, their curvatures, and the Chern forms of T*.
//
// Chart coordinates are the entries of the r x (m-r) matrix Z, flattened as
// coord(j,l) = j*(m-r) + l.  At W_0 (Z = 0) the closed-form identities
//   R^T(W_0)_{kj}  = - sum_l dz_{kl} ^ dzbar_{jl}
//   R^T*(W_0)_{kj} = + sum_l dz_{jl} ^ dzbar_{kl}
// hold exactly, and R^T* = -(R^T)^T at every chart point.

#ifndef KODAIRA_GRASSMANN_HPP
#define KODAIRA_GRASSMANN_HPP

#include "kodaira/chern.hpp"
#include "kodaira/forms.hpp"
#include "kodaira/geometry.hpp"
#include "kodaira/jets.hpp"

namespace kodaira {

struct GrassChartPoint {
  int r = 1, m = 2;
  MatrixXcd Z;  // r x (m-r)

  int coords() const { return r * (m - r); }
  int coord_index(int j, int l) const { return j * (m - r) + l; }

  void validate() const {
    if (r < 1 || m <= r) throw RejectedInput("GrassChartPoint: need 1 <= r < m");
    if (Z.rows() != r || Z.cols() != m - r)
      throw RejectedInput("GrassChartPoint: Z must be r x (m-r)");
    if (!Z.allFinite()) throw RejectedInput("GrassChartPoint: non-finite chart entries");
  }
};

/// MatrixJet of K(W) = I + Z Z*: entry (k,j) = delta_{kj} + sum_l z_{kl} zbar_{jl}.
inline MatrixJet universal_metric(const GrassChartPoint& w) {
  w.validate();
  const int r = w.r, q = w.m - w.r;
  const int dim = w.coords();
  MatrixJet k(r, dim);
  k.value() = MatrixXcd::Identity(r, r) + w.Z * w.Z.adjoint();
  for (int a = 0; a < r; ++a)
    for (int l = 0; l < q; ++l) {
      const int c = w.coord_index(a, l);
      // d/dz_{al} of entry (k,j): delta_{ak} zbar_{jl}
      for (int j = 0; j < r; ++j) k.d(c)(a, j) = std::conj(w.Z(j, l));
      // dbar/dzbar_{al} of entry (k,j): delta_{aj} z_{kl}
      for (int kk = 0; kk < r; ++kk) k.dbar(c)(kk, a) = w.Z(kk, l);
    }
  for (int a = 0; a < r; ++a)
    for (int l = 0; l < q; ++l)
      for (int b = 0; b < r; ++b)
        for (int lp = 0; lp < q; ++lp)
          if (l == lp) k.mixed(w.coord_index(a, l), w.coord_index(b, lp))(a, b) = 1.0;
  return k;
}

/// MatrixJet of H(W) = (K^{-1})^T, the dual-frame metric of T*.
inline MatrixJet dual_universal_metric(const GrassChartPoint& w) {
  return matrix_jet_inverse(universal_metric(w)).transpose();
}

struct GrassCurvatures {
  MatrixOfForms tangent;  // iR^T / 2pi
  MatrixOfForms dual;     // iR^T* / 2pi
};

inline GrassCurvatures curvature_dual_universal(const GrassChartPoint& w) {
  return {curvature_from_metric_frame(universal_metric(w)),
          curvature_from_metric_frame(dual_universal_metric(w))};
}

/// c_k(T*, h^T*) at the chart point, as a (k,k) form in the z_{jl} coordinates.
inline FormAtPoint chern_form_dual_universal(int k, const GrassChartPoint& w) {
  if (k == 0) return FormAtPoint::scalar(w.coords(), 1.0);
  if (k > w.r) throw RejectedInput("chern_form_dual_universal: k exceeds rank");
  return invariant_polynomial(k, curvature_from_metric_frame(dual_universal_metric(w)));
}

/// Integral of c_1(T*) over the coordinate line {Z = (z,0,...,0)} in G(1,m);
/// equals 1 for every m (the line is a projective line of degree one).
inline double dual_universal_line_integral(int m, const QuadratureRule& cp1_nodes) {
  if (m < 2) throw RejectedInput("dual_universal_line_integral: need m >= 2");
  cxd total(0.0, 0.0);
  for (std::size_t i = 0; i < cp1_nodes.size(); ++i) {
    GrassChartPoint w;
    w.r = 1;
    w.m = m;
    w.Z = MatrixXcd::Zero(1, m - 1);
    w.Z(0, 0) = cp1_nodes.nodes[i].z(0);
    const FormAtPoint c1 = chern_form_dual_universal(1, w);
    total += cp1_nodes.w_leb[i] * 2.0 * c1.coeff()(0, 0);
  }
  return total.real();
}

}  // namespace kodaira

#endif
