// Chern-Weil machinery: curvature of a metric frame, elementary invariant
// polynomials P^k (sums of principal k x k minors, determinants expanded by
// permutation since entries commute but do not form a field), Chern forms,
// the tensor-product identity, and intermediate degrees of the Kodaira
// transform.
//
// curvature_from_metric_frame implements
//   R = H^{-1} dbar d H - H^{-1} dbar H ^ H^{-1} d H
// and returns A = (i/2pi) R, whose (1,1) entries have coefficient matrices
//   A[a][b] = (1/2pi) ( -H^{-1} (d_a dbar_b H) + H^{-1}(dbar_b H) H^{-1}(d_a H) )
// with respect to the basis i dz_a ^ dzbar_b.

#ifndef KODAIRA_CHERN_HPP
#define KODAIRA_CHERN_HPP

#include <vector>

#include "kodaira/bundles.hpp"
#include "kodaira/forms.hpp"
#include "kodaira/geometry.hpp"
#include "kodaira/jets.hpp"

namespace kodaira {

inline MatrixOfForms curvature_from_metric_frame(const MatrixJet& h,
                                                 double rcond_min = 1e-12) {
  const int r = h.rows();
  const int m = h.dim();
  Eigen::PartialPivLU<MatrixXcd> lu(h.value());
  const MatrixXcd v = lu.inverse();
  const double n1 = h.value().cwiseAbs().rowwise().sum().maxCoeff();
  const double n2 = v.cwiseAbs().rowwise().sum().maxCoeff();
  const double rcond = 1.0 / (n1 * n2);
  if (!std::isfinite(rcond) || rcond < rcond_min)
    throw ConditioningError("curvature_from_metric_frame: singular metric value", rcond);

  MatrixOfForms out(r, m);
  const double scale = 1.0 / (2.0 * M_PI);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const MatrixXcd block = scale * (-(v * h.mixed(a, b)) + v * h.dbar(b) * v * h.d(a));
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) out.entry(j, k).coeff()(a, b) = block(j, k);
    }
  return out;
}

namespace detail {

/// Permutation-expanded determinant of the principal minor indexed by rows.
inline FormAtPoint wedge_minor_det(const MatrixOfForms& a, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  const int m = a.dim();
  FormAtPoint det(m, k);
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  do {
    int sign = 1;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    FormAtPoint term = FormAtPoint::scalar(m, static_cast<double>(sign));
    for (int i = 0; i < k; ++i) term = wedge(term, a.entry(idx[i], idx[perm[i]]));
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace detail

/// P^k(A) = sum over #I=k of det A_{I,I}; bidegree (k,k).
inline FormAtPoint invariant_polynomial(int k, const MatrixOfForms& a) {
  const int r = a.rank();
  if (k < 0 || k > r) throw RejectedInput("invariant_polynomial: k out of range");
  if (k == 0) return FormAtPoint::scalar(a.dim(), 1.0);
  FormAtPoint sum(a.dim(), k);
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    sum += detail::wedge_minor_det(a, idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == r - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum;
}

/// c_k of the bundle metric frame at a point.
inline FormAtPoint chern_form(int k, const MatrixJet& metric_frame) {
  if (k == 0) return FormAtPoint::scalar(metric_frame.dim(), 1.0);
  if (k > metric_frame.rows()) throw RejectedInput("chern_form: k exceeds rank");
  return invariant_polynomial(k, curvature_from_metric_frame(metric_frame));
}

/// c_k(L^p (x) E, h) at x for the model bundle data.
inline FormAtPoint chern_form_at(const BundleSpec& spec, const ChartPoint& x, int k) {
  return chern_form(k, metric_frame_jet(spec, x));
}

/// c_k(E, h^E) at x (no L power).
inline FormAtPoint chern_form_E_at(const BundleSpec& spec, const ChartPoint& x, int k) {
  return chern_form(k, metric_frame_jet_E(spec, x));
}

/// Sup over sample points of the coefficient-wise gap in
///   c_k(L^p x E) = sum_j binom(r-j, k-j) c_j(E) ^ c_1(L^p)^{k-j}.
/// Both sides are assembled through independent curvature paths, so the
/// residual is roundoff-level.
inline double tensor_chern_identity_residual(const BundleSpec& spec, int k,
                                             const std::vector<ChartPoint>& points) {
  const int r = spec.rank();
  if (k < 0 || k > r) throw RejectedInput("tensor_chern_identity_residual: k out of range");
  double worst = 0.0;
  for (const ChartPoint& x : points) {
    const FormAtPoint lhs = chern_form_at(spec, x, k);
    // c_1(L^p, h^{L^p}) from its own weight jet.
    MatrixJet lp(1, x.dim());
    lp.set_entry(0, 0, o_weight_jet(x, spec.p));
    const FormAtPoint c1lp = chern_form(1, lp);
    FormAtPoint rhs(x.dim(), k);
    for (int j = 0; j <= k; ++j) {
      double binom = 1.0;
      for (int i = 0; i < k - j; ++i) binom = binom * (r - j - i) / (i + 1);
      if (binom == 0.0) continue;
      const FormAtPoint cj = chern_form_E_at(spec, x, j);
      rhs += binom * wedge(cj, wedge_power(c1lp, k - j));
    }
    worst = std::max(worst, (lhs - rhs).norm_inf());
  }
  return worst;
}

/// Intermediate degree of the Kodaira transform of E:
///   lambda_k = int_X c_{k-N+r}(E) ^ omega^{N+n-r-k},  N-r <= k <= N,
/// where N+1 = dim H^0(X, E).  Returns the quadrature value (an integer
/// cohomological degree up to tolerance).
inline double intermediate_degree(const BundleSpec& spec, long long k,
                                  const QuadratureRule& rule, int workers = 1) {
  const int n = spec.space.n;
  const int r = spec.rank();
  long long dim = 0;
  for (int d : spec.degrees) {
    // binom(n + d, n)
    long long b = 1;
    for (int i = 1; i <= n; ++i) b = b * (d + i) / i;
    dim += b;
  }
  const long long bigN = dim - 1;
  if (k < bigN - r || k > bigN)
    throw RejectedInput("intermediate_degree: k outside [N-r, N]");
  const int j = static_cast<int>(k - bigN + r);
  const cxd val = integrate_form(
      [&](const ChartPoint& x) {
        const FormAtPoint cj = chern_form_E_at(spec, x, j);
        const FormAtPoint w = fs_form(x);
        return wedge(cj, wedge_power(w, n - j)).top();
      },
      rule, workers);
  return val.real();
}

}  // namespace kodaira

#endif
