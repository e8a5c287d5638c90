// Concrete model section spaces V_p = H^0(CP^n, O(p) (x) E): monomial bases,
// L^2 Gram matrices from quadrature, triangular orthonormalization, vectorized
// section evaluation, and the L^2-induced Gaussian / Fubini-Study samplers.
//
// Inner product convention: (S, S') is linear in S and antilinear in S', with
// pointwise pairing pair(u, v) = v^dagger W(x) u; the Gram array is
//   G_{rho,sigma} = (basis_sigma, basis_rho),
// i.e. exactly what the chunked B^dagger diag(w) B accumulation produces.
//
// Two Gram paths: a generic tensor-rule path (any twist), and a separable
// path for angularly symmetric weights where the angular sums are Kronecker
// deltas evaluated exactly and only the radial table is quadratured.

#ifndef KODAIRA_SECTIONS_HPP
#define KODAIRA_SECTIONS_HPP

#include <array>
#include <vector>

#include "kodaira/bundles.hpp"
#include "kodaira/chern.hpp"
#include "kodaira/geometry.hpp"
#include "kodaira/rng.hpp"
#include "kodaira/util.hpp"

namespace kodaira {

inline long long binom_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

struct BasisLabel {
  int summand = 0;
  Eigen::VectorXi expo;  // n exponents, sum <= degree of the summand
};

struct SectionSpace {
  BundleSpec spec;
  std::vector<BasisLabel> basis;
  std::vector<int> offset;  // per-summand start index, last entry = dim
  int dim = 0;
  MatrixXcd gram;
  MatrixXcd chol_lower;  // gram = L L^dagger
  MatrixXcd onb;         // L^{-dagger}; column l = coefficients of S_l

  int summand_dim(int j) const { return offset[j + 1] - offset[j]; }
  int degree(int j) const { return spec.p + spec.degrees[j]; }
};

namespace detail {

inline std::vector<BasisLabel> enumerate_basis(const BundleSpec& spec,
                                               std::vector<int>& offset) {
  const int n = spec.space.n;
  std::vector<BasisLabel> basis;
  offset.assign(1, 0);
  for (int j = 0; j < spec.rank(); ++j) {
    const int q = spec.p + spec.degrees[j];
    if (q < 0) throw RejectedInput("enumerate_basis: negative summand degree");
    if (n == 1) {
      for (int e = 0; e <= q; ++e) {
        BasisLabel lbl;
        lbl.summand = j;
        lbl.expo = Eigen::VectorXi::Constant(1, e);
        basis.push_back(lbl);
      }
    } else {
      for (int e1 = 0; e1 <= q; ++e1)
        for (int e2 = 0; e2 <= q - e1; ++e2) {
          BasisLabel lbl;
          lbl.summand = j;
          lbl.expo.resize(2);
          lbl.expo << e1, e2;
          basis.push_back(lbl);
        }
    }
    offset.push_back(static_cast<int>(basis.size()));
  }
  return basis;
}

/// Monomial values of one summand's basis at x (chart 0).
inline VectorXcd monomial_values(const ChartPoint& x, int n, int q) {
  if (n == 1) {
    VectorXcd v(q + 1);
    cxd pw(1.0, 0.0);
    for (int e = 0; e <= q; ++e) {
      v(e) = pw;
      pw *= x.z(0);
    }
    return v;
  }
  std::vector<cxd> p1(q + 1), p2(q + 1);
  p1[0] = p2[0] = 1.0;
  for (int e = 1; e <= q; ++e) {
    p1[e] = p1[e - 1] * x.z(0);
    p2[e] = p2[e - 1] * x.z(1);
  }
  VectorXcd v(binom_ll(q + 2, 2));
  int i = 0;
  for (int e1 = 0; e1 <= q; ++e1)
    for (int e2 = 0; e2 <= q - e1; ++e2) v(i++) = p1[e1] * p2[e2];
  return v;
}

/// Monomial values at a point in any chart.  A basis monomial with chart-0
/// exponents (e_1..e_n) is the homogeneous monomial with exponents
/// (q - sum e, e_1, .., e_n); its chart-c representative divides by x_c^q,
/// i.e. evaluates as the product of affine coordinates to the homogeneous
/// exponents of the slots other than c.
inline VectorXcd monomial_values_chart(const ChartPoint& x, int n, int q) {
  if (x.chart == 0) return monomial_values(x, n, q);
  if (n == 1) {
    // chart 1: z^e -> w^{q-e}
    VectorXcd v(q + 1);
    std::vector<cxd> pw(q + 1);
    pw[0] = 1.0;
    for (int e = 1; e <= q; ++e) pw[e] = pw[e - 1] * x.z(0);
    for (int e = 0; e <= q; ++e) v(e) = pw[q - e];
    return v;
  }
  // n = 2: affine slots of chart c list homogeneous indices != c in order.
  std::vector<std::vector<cxd>> pw(2, std::vector<cxd>(q + 1));
  pw[0][0] = pw[1][0] = 1.0;
  for (int e = 1; e <= q; ++e) {
    pw[0][e] = pw[0][e - 1] * x.z(0);
    pw[1][e] = pw[1][e - 1] * x.z(1);
  }
  VectorXcd v(binom_ll(q + 2, 2));
  int i = 0;
  for (int e1 = 0; e1 <= q; ++e1)
    for (int e2 = 0; e2 <= q - e1; ++e2, ++i) {
      const int a[3] = {q - e1 - e2, e1, e2};  // homogeneous exponents
      int slot = 0;
      cxd prod(1.0, 0.0);
      for (int h = 0; h <= 2; ++h) {
        if (h == x.chart) continue;
        prod *= pw[slot][a[h]];
        ++slot;
      }
      v(i) = prod;
    }
  return v;
}

/// Values and holomorphic first derivatives of the monomials at a point in
/// any chart (derivatives with respect to that chart's affine coordinates).
inline void monomial_jets_chart(const ChartPoint& x, int n, int q, VectorXcd& val,
                                std::vector<VectorXcd>& der) {
  val = monomial_values_chart(x, n, q);
  der.assign(n, VectorXcd::Zero(val.size()));
  if (n == 1) {
    if (x.chart == 0) {
      for (int e = 1; e <= q; ++e) der[0](e) = static_cast<double>(e) * val(e - 1);
    } else {
      std::vector<cxd> pw(q + 1);
      pw[0] = 1.0;
      for (int e = 1; e <= q; ++e) pw[e] = pw[e - 1] * x.z(0);
      for (int e = 0; e <= q; ++e)
        if (q - e >= 1) der[0](e) = static_cast<double>(q - e) * pw[q - e - 1];
    }
    return;
  }
  std::vector<std::vector<cxd>> pw(2, std::vector<cxd>(q + 1));
  pw[0][0] = pw[1][0] = 1.0;
  for (int e = 1; e <= q; ++e) {
    pw[0][e] = pw[0][e - 1] * x.z(0);
    pw[1][e] = pw[1][e - 1] * x.z(1);
  }
  int i = 0;
  for (int e1 = 0; e1 <= q; ++e1)
    for (int e2 = 0; e2 <= q - e1; ++e2, ++i) {
      const int a[3] = {q - e1 - e2, e1, e2};
      int expo[2];
      int slot = 0;
      for (int h = 0; h <= 2; ++h) {
        if (h == x.chart) continue;
        expo[slot++] = a[h];
      }
      for (int s = 0; s < 2; ++s) {
        if (expo[s] == 0) continue;
        cxd dv = static_cast<double>(expo[s]);
        dv *= (expo[s] >= 1 ? pw[s][expo[s] - 1] : cxd(0, 0));
        dv *= pw[1 - s][expo[1 - s]];
        der[s](i) = dv;
      }
    }
}

/// Values and holomorphic first derivatives d_a of the monomials.
inline void monomial_values_and_derivs(const ChartPoint& x, int n, int q, VectorXcd& val,
                                       std::vector<VectorXcd>& der) {
  val = monomial_values(x, n, q);
  der.assign(n, VectorXcd::Zero(val.size()));
  if (n == 1) {
    for (int e = 1; e <= q; ++e) der[0](e) = static_cast<double>(e) * val(e - 1);
    return;
  }
  std::vector<cxd> p1(q + 1), p2(q + 1);
  p1[0] = p2[0] = 1.0;
  for (int e = 1; e <= q; ++e) {
    p1[e] = p1[e - 1] * x.z(0);
    p2[e] = p2[e - 1] * x.z(1);
  }
  int i = 0;
  for (int e1 = 0; e1 <= q; ++e1)
    for (int e2 = 0; e2 <= q - e1; ++e2, ++i) {
      if (e1 > 0) der[0](i) = static_cast<double>(e1) * p1[e1 - 1] * p2[e2];
      if (e2 > 0) der[1](i) = static_cast<double>(e2) * p1[e1] * p2[e2 - 1];
    }
}

/// Generic-path Gram on an explicit rule: chunked B^dagger diag(w) B per
/// summand pair.
inline MatrixXcd build_gram_generic(const BundleSpec& spec,
                                    const std::vector<BasisLabel>& basis,
                                    const std::vector<int>& offset,
                                    const QuadratureRule& rule, int workers = 1) {
  const int n = spec.space.n;
  const int r = spec.rank();
  const int dim = static_cast<int>(basis.size());
  const std::size_t chunk = 2048;
  const std::size_t nchunks = (rule.size() + chunk - 1) / chunk;
  std::vector<MatrixXcd> partial(nchunks);
  parallel_for(nchunks, workers, [&](std::size_t c) {
    const std::size_t lo = c * chunk, hi = std::min(rule.size(), (c + 1) * chunk);
    const int cnt = static_cast<int>(hi - lo);
    std::vector<MatrixXcd> b(r);
    for (int j = 0; j < r; ++j) b[j].resize(cnt, offset[j + 1] - offset[j]);
    std::vector<MatrixXcd> wline(r * r, MatrixXcd::Zero(cnt, 1));
    for (int i = 0; i < cnt; ++i) {
      const ChartPoint& x = rule.nodes[lo + i];
      const MatrixXcd w = metric_value(spec, x);
      for (int j = 0; j < r; ++j) {
        b[j].row(i) = monomial_values(x, n, spec.p + spec.degrees[j]).transpose();
        for (int l = 0; l < r; ++l)
          wline[j * r + l](i, 0) = rule.w_fs[lo + i] * w(j, l);
      }
    }
    MatrixXcd g = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < r; ++j)
      for (int l = 0; l < r; ++l) {
        if (wline[j * r + l].cwiseAbs().maxCoeff() == 0.0) continue;
        g.block(offset[j], offset[l], b[j].cols(), b[l].cols()) +=
            b[j].adjoint() * wline[j * r + l].col(0).asDiagonal() * b[l];
      }
    partial[c] = g;
  });
  MatrixXcd gram = MatrixXcd::Zero(dim, dim);
  for (const MatrixXcd& g : partial) gram += g;
  return gram;
}

/// Separable path: angular integrals are exact Kronecker deltas; only the
/// radial table is quadratured.  Valid when the metric weight depends on the
/// coordinates only through |z_a|^2 (FS weights, radial twists).
inline MatrixXcd build_gram_separable(const BundleSpec& spec,
                                      const std::vector<BasisLabel>& basis,
                                      const std::vector<int>& offset, int n_t, int n_w) {
  const int n = spec.space.n;
  const int r = spec.rank();
  const int dim = static_cast<int>(basis.size());
  MatrixXcd gram = MatrixXcd::Zero(dim, dim);

  std::vector<double> t, wt, w, ww;
  gauss_legendre_01(n_t, t, wt);
  if (n == 2) gauss_legendre_01(n_w, w, ww);

  // Radial nodes with FS weights (the angular factor is already integrated).
  struct RadNode {
    ChartPoint x;
    double wfs;
  };
  std::vector<RadNode> rad;
  if (n == 1) {
    for (int i = 0; i < n_t; ++i) {
      RadNode rn;
      rn.x.chart = 0;
      rn.x.z = VectorXcd::Constant(1, cxd(std::sqrt(t[i] / (1.0 - t[i])), 0.0));
      rn.wfs = wt[i];
      rad.push_back(rn);
    }
  } else {
    for (int i = 0; i < n_t; ++i) {
      const double v = t[i] / (1.0 - t[i]);
      for (int j = 0; j < n_w; ++j) {
        RadNode rn;
        rn.x.chart = 0;
        rn.x.z.resize(2);
        rn.x.z(0) = std::sqrt(v * w[j]);
        rn.x.z(1) = std::sqrt(v * (1.0 - w[j]));
        rn.wfs = wt[i] * t[i] * ww[j];
        rad.push_back(rn);
      }
    }
  }

  for (int j = 0; j < r; ++j)
    for (int l = 0; l < r; ++l) {
      const int qj = spec.p + spec.degrees[j], ql = spec.p + spec.degrees[l];
      if (j != l && qj != ql) continue;  // diagonal metric, distinct degrees
      // Accumulate radial integrals per exponent multi-index.
      const int nj = offset[j + 1] - offset[j];
      VectorXcd diag = VectorXcd::Zero(nj);
      bool any = false;
      for (const RadNode& rn : rad) {
        const MatrixXcd wm = metric_value(spec, rn.x);
        if (wm(j, l) == cxd(0.0, 0.0)) continue;
        any = true;
        const VectorXcd mono = monomial_values(rn.x, n, qj);  // real positive here
        diag += (rn.wfs * wm(j, l)) * mono.cwiseAbs2().cast<cxd>();
      }
      if (!any) continue;
      for (int a = 0; a < nj; ++a) gram(offset[j] + a, offset[l] + a) += diag(a);
    }
  return gram;
}

/// Cholesky with pivot diagnostics.
inline void factor_gram(const MatrixXcd& gram, MatrixXcd& lower, MatrixXcd& onb) {
  Eigen::LLT<MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) {
    // Re-run a plain Cholesky to name the offending pivot.
    const int dim = static_cast<int>(gram.rows());
    MatrixXcd a = gram;
    for (int k = 0; k < dim; ++k) {
      const double piv = a(k, k).real();
      if (!(piv > 0.0))
        throw ConditioningError(
            "build_space: Gram not numerically positive definite at pivot " +
                std::to_string(k) + "; increase the quadrature resolution",
            piv);
      for (int i = k + 1; i < dim; ++i)
        for (int j = k + 1; j <= i; ++j)
          a(i, j) -= a(i, k) * std::conj(a(j, k)) / piv;
      const double root = std::sqrt(piv);
      for (int i = k; i < dim; ++i) a(i, k) /= root;
    }
    throw ConditioningError("build_space: Gram factorization failed", 0.0);
  }
  lower = llt.matrixL();
  const MatrixXcd upper = lower.adjoint();
  onb = upper.triangularView<Eigen::Upper>().solve(
      MatrixXcd::Identity(gram.rows(), gram.cols()));
}

}  // namespace detail

/// Resolution knobs for build_space; zero fields are sized from the degrees.
struct GramResolution {
  int n_t = 0, n_w = 0, n_ang = 0;
  double factor = 1.0;  // multiplies the automatic sizes
};

inline SectionSpace build_space(const BundleSpec& spec, const GramResolution& res = {},
                                int workers = 1) {
  spec.validate();
  if (spec.p < 1) throw RejectedInput("build_space: p >= 1 required");
  SectionSpace s;
  s.spec = spec;
  s.basis = detail::enumerate_basis(spec, s.offset);
  s.dim = static_cast<int>(s.basis.size());

  int qmax = 0;
  for (int d : spec.degrees) qmax = std::max(qmax, spec.p + d);
  const bool has_smooth_twist = !spec.conformal.empty() || spec.matrix_twist != nullptr;
  // Polynomial-exact sizes for pure FS weights; margin for smooth radial twists.
  int n_t = res.n_t ? res.n_t : static_cast<int>(((qmax + 4) / 2 + 2) * res.factor);
  if (has_smooth_twist) n_t = std::max(n_t, 48);
  int n_w = res.n_w ? res.n_w : n_t;
  int n_ang = res.n_ang ? res.n_ang : static_cast<int>((qmax + 2) * res.factor);

  if (spec.space.n == 1) {
    // The 2D tensor rule is cheap on CP^1; it also covers non-radial twists.
    s.gram = detail::build_gram_generic(spec, s.basis, s.offset, cp1_rule(n_t, n_ang),
                                        workers);
  } else if (spec.twist_is_radial) {
    s.gram = detail::build_gram_separable(spec, s.basis, s.offset, n_t, n_w);
  } else {
    s.gram = detail::build_gram_generic(spec, s.basis, s.offset,
                                        cp2_rule(n_t, n_w, n_ang), workers);
  }
  detail::factor_gram(s.gram, s.chol_lower, s.onb);
  return s;
}

/// Gram of the same basis re-integrated on an explicit rule (validation and
/// Bergman trace integrals).
inline MatrixXcd reintegrated_gram(const SectionSpace& s, const QuadratureRule& rule,
                                   int workers = 1) {
  return detail::build_gram_generic(s.spec, s.basis, s.offset, rule, workers);
}

/// Fiber value of a section at x (chart 0): per-summand holomorphic jets.
struct SectionFiberJet {
  std::vector<MixedJet2> comp;
};

inline SectionFiberJet evaluate_section_jet(const SectionSpace& s, const VectorXcd& coeffs,
                                            const ChartPoint& x) {
  if (x.chart != 0) throw RejectedInput("evaluate_section_jet: chart 0 required");
  if (coeffs.size() != s.dim) throw RejectedInput("evaluate_section_jet: bad coefficients");
  const int n = s.spec.space.n;
  SectionFiberJet out;
  for (int j = 0; j < s.spec.rank(); ++j) {
    VectorXcd val;
    std::vector<VectorXcd> der;
    detail::monomial_values_and_derivs(x, n, s.degree(j), val, der);
    MixedJet2 jet(n);
    const VectorXcd block = coeffs.segment(s.offset[j], s.summand_dim(j));
    jet.set_value((block.transpose() * val).value());
    for (int a = 0; a < n; ++a) jet.d()(a) = (block.transpose() * der[a]).value();
    out.comp.push_back(jet);
  }
  return out;
}

/// |s(x)|^2_h as a jet (pairing the fiber jets against the metric frame).
inline MixedJet2 section_norm2_jet(const SectionSpace& s, const VectorXcd& coeffs,
                                   const ChartPoint& x) {
  const SectionFiberJet f = evaluate_section_jet(s, coeffs, x);
  const MatrixJet w = metric_frame_jet(s.spec, x);
  MixedJet2 acc(x.dim());
  for (int j = 0; j < s.spec.rank(); ++j)
    for (int l = 0; l < s.spec.rank(); ++l)
      acc += jet_mul(jet_mul(jet_conj(f.comp[j]), w.entry(j, l)), f.comp[l]);
  return acc;
}

/// L^2-induced Gaussian sample: coefficients of sum_l g_l S_l.
inline VectorXcd sample_gaussian_section(const SectionSpace& s, RngStream& rng) {
  VectorXcd g(s.dim);
  for (int i = 0; i < s.dim; ++i) g(i) = rng.next_complex_gaussian();
  return s.onb * g;
}

/// Fubini-Study sample on P V_p: the normalized Gaussian.
inline VectorXcd sample_fs_section(const SectionSpace& s, RngStream& rng) {
  VectorXcd g(s.dim);
  for (int i = 0; i < s.dim; ++i) g(i) = rng.next_complex_gaussian();
  const double norm = g.norm();
  return s.onb * (g / norm);
}

/// (s, s')_p from coefficient vectors.
inline cxd l2_inner(const SectionSpace& s, const VectorXcd& a, const VectorXcd& b) {
  return (b.adjoint() * s.gram * a)(0, 0);
}

// ---------------------------------------------------------------------------
// Covariance of components under a constant matrix twist (metric weight A^{-1}).
// ---------------------------------------------------------------------------

struct CovarianceReport {
  MatrixXcd estimate;      // MC mean of (s_j, s_l)_p in the untwisted product
  Eigen::MatrixXd stderr_; // per-entry standard error
  double marginal_variance = 0.0;  // pooled per-coordinate variance of components
  double marginal_se = 0.0;
  int samples = 0;
  long long n_p = 0;
};

/// Prop-7.2-style experiment: E[(s_j, s_l)_p] = n_p a_{jl} and each component
/// is distributed like sqrt(a_jj) times an L^2 Gaussian of H^0(X, L^p).
inline CovarianceReport covariance_experiment(const SectionSpace& twisted, int samples,
                                              RngStream rng) {
  const BundleSpec& spec = twisted.spec;
  if (!spec.constant_twist.size())
    throw RejectedInput("covariance_experiment: constant matrix twist required");
  const int r = spec.rank();
  // Untwisted scalar space of H^0(X, O(p + d)).
  BundleSpec scalar_spec = spec;
  scalar_spec.degrees = {spec.degrees[0]};
  scalar_spec.constant_twist = MatrixXcd();
  scalar_spec.allow_rank_exceeding_dim = false;
  const SectionSpace scalar = build_space(scalar_spec);
  const long long n_p = scalar.dim;

  MatrixXcd mean = MatrixXcd::Zero(r, r);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(r, r);
  std::vector<MatrixXcd> vals;
  vals.reserve(samples);
  double var_accum = 0.0;
  long long var_count = 0;
  for (int i = 0; i < samples; ++i) {
    RngStream stream = rng.derive(i);
    const VectorXcd c = sample_gaussian_section(twisted, stream);
    MatrixXcd est(r, r);
    for (int j = 0; j < r; ++j)
      for (int l = 0; l < r; ++l) {
        const auto cj = c.segment(twisted.offset[j], n_p);
        const auto cl = c.segment(twisted.offset[l], n_p);
        est(j, l) = (cl.adjoint() * scalar.gram * cj)(0, 0);
      }
    vals.push_back(est);
    mean += est;
    // Marginal check data: orthonormal coordinates of each component should be
    // iid complex Gaussians of variance a_jj.
    for (int j = 0; j < r; ++j) {
      const VectorXcd ortho =
          scalar.chol_lower.adjoint() * c.segment(twisted.offset[j], n_p);
      const double ajj = spec.constant_twist(j, j).real();
      var_accum += ortho.squaredNorm() / ajj;
      var_count += ortho.size();
    }
  }
  mean /= static_cast<double>(samples);
  for (const MatrixXcd& v : vals) m2 += (v - mean).cwiseAbs2();
  CovarianceReport rep;
  rep.estimate = mean;
  rep.stderr_ = (m2 / (static_cast<double>(samples) * (samples - 1.0))).cwiseSqrt();
  rep.samples = samples;
  rep.n_p = n_p;
  rep.marginal_variance = var_accum / static_cast<double>(var_count);
  rep.marginal_se = 1.0 / std::sqrt(static_cast<double>(var_count));
  return rep;
}

}  // namespace kodaira

#endif
