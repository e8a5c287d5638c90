// Bundle data on the model spaces: E = O(d_1) + ... + O(d_r) over CP^n with
// Fubini-Study metrics, optionally twisted by per-summand conformal factors
// e^{-psi_j}, by a smooth positive matrix field (equal degrees only), or by a
// constant positive matrix A (metric weight A^{-1}).
//
// metric_frame_jet returns the frame matrix of L^p (x) E in the standard
// chart-0 frame; feeding it to curvature_from_metric_frame yields iR/2pi.

#ifndef KODAIRA_BUNDLES_HPP
#define KODAIRA_BUNDLES_HPP

#include <functional>
#include <vector>

#include "kodaira/geometry.hpp"
#include "kodaira/jets.hpp"

namespace kodaira {

using ScalarField = std::function<MixedJet2(const ChartPoint&)>;
using MatrixField = std::function<MatrixJet(const ChartPoint&)>;

struct BundleSpec {
  ModelSpace space;
  int p = 1;                 // power of L = O(1)
  std::vector<int> degrees;  // summand degrees d_j of E

  // Twists (mutually exclusive):
  std::vector<ScalarField> conformal;  // per-summand, metric factor e^{-psi_j}
  MatrixField matrix_twist;            // equal degrees only
  MatrixXcd constant_twist;            // constant A in M_+(C^r); weight A^{-1}

  // Radial twists keep the Gram matrix angularly diagonal; used to pick the
  // separable quadrature path on CP^2.
  bool twist_is_radial = true;
  // The tuple experiments on CP^1 use r > n; must be flagged explicitly.
  bool allow_rank_exceeding_dim = false;

  int rank() const { return static_cast<int>(degrees.size()); }

  void validate() const {
    if (degrees.empty()) throw RejectedInput("BundleSpec: rank zero");
    if (rank() > space.n && !allow_rank_exceeding_dim)
      throw RejectedInput("BundleSpec: rank exceeds dimension (flag required)");
    if (matrix_twist || constant_twist.size()) {
      for (int d : degrees)
        if (d != degrees[0])
          throw RejectedInput("BundleSpec: matrix twists need equal summand degrees");
    }
    if (!conformal.empty() && static_cast<int>(conformal.size()) != rank())
      throw RejectedInput("BundleSpec: one conformal factor per summand required");
  }
};

/// Jet of the O(q) weight (1+||z||^2)^{-q} in chart coordinates.
inline MixedJet2 o_weight_jet(const ChartPoint& x, int q) {
  if (q == 0) return MixedJet2::constant(x.dim(), 1.0);
  return jet_pow(one_plus_norm2_jet(x), static_cast<double>(-q));
}

namespace detail {

inline MatrixJet assemble_frame(const BundleSpec& spec, const ChartPoint& x, int p_power) {
  spec.validate();
  const int r = spec.rank();
  const int m = x.dim();
  MatrixJet h(r, m);
  if (spec.matrix_twist || spec.constant_twist.size()) {
    // (1+s)^{-(p+d)} times the matrix weight.
    const MixedJet2 line = o_weight_jet(x, p_power + spec.degrees[0]);
    MatrixJet w(r, m);
    if (spec.matrix_twist) {
      w = spec.matrix_twist(x);
    } else {
      Eigen::PartialPivLU<MatrixXcd> lu(spec.constant_twist);
      w.value() = lu.inverse();
    }
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) h.set_entry(j, k, jet_mul(line, w.entry(j, k)));
    return h;
  }
  for (int j = 0; j < r; ++j) {
    MixedJet2 e = o_weight_jet(x, p_power + spec.degrees[j]);
    if (!spec.conformal.empty())
      e = jet_mul(e, jet_exp(cxd(-1.0, 0.0) * spec.conformal[j](x)));
    h.set_entry(j, j, e);
  }
  return h;
}

}  // namespace detail

/// Frame matrix of h^{L^p (x) E} at x (chart 0 frame).
inline MatrixJet metric_frame_jet(const BundleSpec& spec, const ChartPoint& x) {
  return detail::assemble_frame(spec, x, spec.p);
}

/// Frame matrix of h^E alone (no power of L).
inline MatrixJet metric_frame_jet_E(const BundleSpec& spec, const ChartPoint& x) {
  return detail::assemble_frame(spec, x, 0);
}

/// Pointwise weight value matrix of L^p (x) E, the value part of the frame jet.
inline MatrixXcd metric_value(const BundleSpec& spec, const ChartPoint& x) {
  return metric_frame_jet(spec, x).value();
}

}  // namespace kodaira

#endif
