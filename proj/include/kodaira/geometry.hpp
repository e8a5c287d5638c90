// Model manifolds CP^1 and CP^2 with the Fubini-Study polarization: charts,
// metric weight jets, volume quadrature, and FS-distributed random points.
//
// Conventions.  omega_FS = (i/2pi) d dbar log(1 + |z|^2) in any affine chart,
// normalized so that int_{CP^n} omega^n = 1; the L^2 volume form is
// omega^n / n!, of total mass 1 on CP^1 and 1/2 on CP^2.  The standard frame
// of O(1) on chart 0 has squared norm phi_L(z) = (1 + |z|^2)^{-1}.
//
// Quadrature.  Radial directions use the exact algebraic compression
// u = |z|^2 = t/(1-t), t in (0,1), under which the FS measure becomes
// Lebesgue dt and monomial integrands become polynomials in t; combined with
// Gauss-Legendre in t and trapezoid in angles the rule integrates every Gram
// entry of O(q) exactly once the node counts exceed the stated degrees.

#ifndef KODAIRA_GEOMETRY_HPP
#define KODAIRA_GEOMETRY_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "kodaira/forms.hpp"
#include "kodaira/jets.hpp"
#include "kodaira/rng.hpp"
#include "kodaira/util.hpp"

namespace kodaira {

struct ModelSpace {
  int n = 1;  // complex dimension, 1 or 2

  static ModelSpace cp1() { return {1}; }
  static ModelSpace cp2() { return {2}; }
  int chart_count() const { return n + 1; }
  /// Total mass of omega^n / n!.
  double volume() const { return n == 1 ? 1.0 : 0.5; }
};

struct ChartPoint {
  int chart = 0;
  VectorXcd z;  // n affine coordinates

  int dim() const { return static_cast<int>(z.size()); }
};

/// Homogeneous coordinates with a 1 in slot `chart`.
inline VectorXcd homogeneous(const ChartPoint& x) {
  const int n = x.dim();
  VectorXcd h(n + 1);
  int k = 0;
  for (int j = 0; j <= n; ++j) h(j) = (j == x.chart) ? cxd(1.0, 0.0) : x.z(k++);
  return h;
}

inline ChartPoint to_chart(const ChartPoint& x, int chart) {
  const VectorXcd h = homogeneous(x);
  if (h(chart) == cxd(0.0, 0.0))
    throw RejectedInput("to_chart: point not representable in requested chart");
  const int n = x.dim();
  ChartPoint y;
  y.chart = chart;
  y.z.resize(n);
  int k = 0;
  for (int j = 0; j <= n; ++j)
    if (j != chart) y.z(k++) = h(j) / h(chart);
  return y;
}

inline ChartPoint best_chart(const ChartPoint& x) {
  const VectorXcd h = homogeneous(x);
  int c = 0;
  for (int j = 1; j < h.size(); ++j)
    if (std::abs(h(j)) > std::abs(h(c))) c = j;
  return to_chart(x, c);
}

/// Jacobian d z'_i / d z_j of the transition map from x.chart to `chart`,
/// evaluated at x.
inline MatrixXcd transition_jacobian(const ChartPoint& x, int chart) {
  const int n = x.dim();
  const VectorXcd h = homogeneous(x);
  const cxd xc = h(chart);
  if (xc == cxd(0.0, 0.0)) throw RejectedInput("transition_jacobian: target chart invalid");
  // slot(j) = index of homogeneous coordinate j among the affine coords of x.chart
  auto slot_of = [&](int j) {
    int s = 0;
    for (int t = 0; t <= n; ++t) {
      if (t == x.chart) continue;
      if (t == j) return s;
      ++s;
    }
    return -1;
  };
  MatrixXcd jac = MatrixXcd::Zero(n, n);
  int row = 0;
  for (int k = 0; k <= n; ++k) {
    if (k == chart) continue;
    // w_row = x_k / x_chart as a function of the old affine coordinates
    for (int j = 0; j <= n; ++j) {
      if (j == x.chart) continue;
      const int col = slot_of(j);
      cxd d(0.0, 0.0);
      if (j == k) d += 1.0 / xc;
      if (j == chart) d -= h(k) / (xc * xc);
      jac(row, col) = d;
    }
    ++row;
  }
  return jac;
}

/// Pullback of a (1,1)-form coefficient matrix under the chart transition:
/// C' = J^T C conj(J), with J the Jacobian of old coords in terms of new.
inline MatrixXcd pullback_one_one(const MatrixXcd& c, const MatrixXcd& jac_old_by_new) {
  return jac_old_by_new.transpose() * c * jac_old_by_new.conjugate();
}

// ---------------------------------------------------------------------------
// Metric weight jets.
// ---------------------------------------------------------------------------

/// Jet of 1 + ||z||^2 at the chart point.
inline MixedJet2 one_plus_norm2_jet(const ChartPoint& x) {
  const int n = x.dim();
  MixedJet2 s = MixedJet2::constant(n, 1.0);
  for (int a = 0; a < n; ++a)
    s += jet_mul(MixedJet2::coordinate(n, a, x.z(a)),
                 MixedJet2::coordinate_conj(n, a, x.z(a)));
  return s;
}

/// Squared norm of the standard O(1) frame: phi_L = (1 + ||z||^2)^{-1}.
inline MixedJet2 fs_weight_jet(const ChartPoint& x) {
  return jet_reciprocal(one_plus_norm2_jet(x));
}

/// omega_FS at the point as a (1,1) coefficient matrix (basis i dz_a dzbar_b).
inline FormAtPoint fs_form(const ChartPoint& x) {
  const MixedJet2 lg = jet_log(one_plus_norm2_jet(x));
  return FormAtPoint::one_one(lg.mixed() / (2.0 * M_PI));
}

// ---------------------------------------------------------------------------
// Quadrature rules.
// ---------------------------------------------------------------------------

namespace detail {

/// Gauss-Legendre nodes/weights on (0,1) by Newton iteration on P_n.
inline void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess on (-1,1).
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[n - 1 - i] = 0.5 * (1.0 + t);
    w[n - 1 - i] = 1.0 / ((1.0 - t * t) * pp * pp);
  }
}

}  // namespace detail

/// Nodes in chart 0 with Fubini-Study volume weights (summing to vol(X)) and
/// Lebesgue weights for integrating raw chart densities.
struct QuadratureRule {
  ModelSpace space;
  std::vector<ChartPoint> nodes;
  std::vector<double> w_fs;
  std::vector<double> w_leb;

  std::size_t size() const { return nodes.size(); }
  double total_mass() const {
    double s = 0.0;
    for (double w : w_fs) s += w;
    return s;
  }
};

/// CP^1 tensor rule: n_rad Gauss-Legendre nodes in t = |z|^2/(1+|z|^2),
/// n_ang equally spaced angles.
inline QuadratureRule cp1_rule(int n_rad = 256, int n_ang = 256) {
  std::vector<double> t, wt;
  detail::gauss_legendre_01(n_rad, t, wt);
  QuadratureRule rule;
  rule.space = ModelSpace::cp1();
  rule.nodes.reserve(static_cast<std::size_t>(n_rad) * n_ang);
  rule.w_fs.reserve(rule.nodes.capacity());
  rule.w_leb.reserve(rule.nodes.capacity());
  for (int i = 0; i < n_rad; ++i) {
    const double u = t[i] / (1.0 - t[i]);
    const double rho = std::sqrt(u);
    const double wfs = wt[i] / n_ang;
    const double wleb = wt[i] / ((1.0 - t[i]) * (1.0 - t[i])) * M_PI / n_ang;
    for (int q = 0; q < n_ang; ++q) {
      const double th = 2.0 * M_PI * q / n_ang;
      ChartPoint p;
      p.chart = 0;
      p.z.resize(1);
      p.z(0) = cxd(rho * std::cos(th), rho * std::sin(th));
      rule.nodes.push_back(std::move(p));
      rule.w_fs.push_back(wfs);
      rule.w_leb.push_back(wleb);
    }
  }
  return rule;
}

/// CP^2 tensor rule: radius t, simplex split w, two angles.
inline QuadratureRule cp2_rule(int n_t = 16, int n_w = 16, int n_ang = 32) {
  std::vector<double> t, wt, w, ww;
  detail::gauss_legendre_01(n_t, t, wt);
  detail::gauss_legendre_01(n_w, w, ww);
  QuadratureRule rule;
  rule.space = ModelSpace::cp2();
  const std::size_t total =
      static_cast<std::size_t>(n_t) * n_w * n_ang * n_ang;
  rule.nodes.reserve(total);
  rule.w_fs.reserve(total);
  rule.w_leb.reserve(total);
  for (int i = 0; i < n_t; ++i) {
    const double v = t[i] / (1.0 - t[i]);
    for (int j = 0; j < n_w; ++j) {
      const double u1 = v * w[j], u2 = v * (1.0 - w[j]);
      const double r1 = std::sqrt(u1), r2 = std::sqrt(u2);
      const double wfs = wt[i] * t[i] * ww[j] / (static_cast<double>(n_ang) * n_ang);
      const double wleb = wt[i] * ww[j] * t[i] / std::pow(1.0 - t[i], 3) * M_PI * M_PI /
                          (static_cast<double>(n_ang) * n_ang);
      for (int q1 = 0; q1 < n_ang; ++q1) {
        const double th1 = 2.0 * M_PI * q1 / n_ang;
        for (int q2 = 0; q2 < n_ang; ++q2) {
          const double th2 = 2.0 * M_PI * q2 / n_ang;
          ChartPoint p;
          p.chart = 0;
          p.z.resize(2);
          p.z(0) = cxd(r1 * std::cos(th1), r1 * std::sin(th1));
          p.z(1) = cxd(r2 * std::cos(th2), r2 * std::sin(th2));
          rule.nodes.push_back(std::move(p));
          rule.w_fs.push_back(wfs);
          rule.w_leb.push_back(wleb);
        }
      }
    }
  }
  return rule;
}

inline QuadratureRule default_rule(const ModelSpace& space) {
  return space.n == 1 ? cp1_rule() : cp2_rule();
}

/// int f omega^n/n! by the rule; deterministic for fixed rule and any worker
/// count (fixed-size chunks, in-order combination).
inline cxd integrate(const std::function<cxd(const ChartPoint&)>& f, const QuadratureRule& rule,
                     int workers = 1) {
  return deterministic_chunked_sum<cxd>(
      rule.size(), workers, 4096,
      [&](std::size_t i) {
        const cxd v = f(rule.nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw EvaluationError("integrate: non-finite integrand value at node");
        return rule.w_fs[i] * v;
      },
      cxd(0.0, 0.0));
}

/// Integral of an (n,n)-form given pointwise by its top coefficient
/// (basis element e_{F,F} = 2^n Lebesgue).
inline cxd integrate_form(const std::function<cxd(const ChartPoint&)>& top_coeff,
                          const QuadratureRule& rule, int workers = 1) {
  const double two_n = std::pow(2.0, rule.space.n);
  return deterministic_chunked_sum<cxd>(
      rule.size(), workers, 4096,
      [&](std::size_t i) {
        const cxd v = top_coeff(rule.nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw EvaluationError("integrate_form: non-finite coefficient at node");
        return rule.w_leb[i] * two_n * v;
      },
      cxd(0.0, 0.0));
}

/// FS-distributed random point: normalize a standard Gaussian vector in
/// C^{n+1}, keep the chart with the largest-modulus coordinate.
inline ChartPoint sample_fs_point(const ModelSpace& space, RngStream& rng) {
  const int n = space.n;
  VectorXcd g(n + 1);
  for (int j = 0; j <= n; ++j) g(j) = rng.next_complex_gaussian();
  int c = 0;
  for (int j = 1; j <= n; ++j)
    if (std::abs(g(j)) > std::abs(g(c))) c = j;
  ChartPoint p;
  p.chart = c;
  p.z.resize(n);
  int k = 0;
  for (int j = 0; j <= n; ++j)
    if (j != c) p.z(k++) = g(j) / g(c);
  return p;
}

// ---------------------------------------------------------------------------
// Smooth test data on the manifold (chart-aware jets).
// ---------------------------------------------------------------------------

/// Jet of |x_j|^2 / ||x||^2 in the chart of the given point (a genuine smooth
/// function on CP^n).
inline MixedJet2 homogeneous_ratio_jet(const ChartPoint& x, int j) {
  const int n = x.dim();
  MixedJet2 num(n);
  if (j == x.chart) {
    num = MixedJet2::constant(n, 1.0);
  } else {
    int slot = 0;
    for (int t = 0; t <= n; ++t) {
      if (t == x.chart) continue;
      if (t == j) break;
      ++slot;
    }
    num = jet_mul(MixedJet2::coordinate(n, slot, x.z(slot)),
                  MixedJet2::coordinate_conj(n, slot, x.z(slot)));
  }
  return jet_mul(num, jet_reciprocal(one_plus_norm2_jet(x)));
}

/// Jet of x_j conj(x_k) / ||x||^2 in the chart of x (smooth on CP^n).
inline MixedJet2 homogeneous_pair_jet(const ChartPoint& x, int j, int k) {
  const int n = x.dim();
  auto hom_jet = [&](int t) {
    if (t == x.chart) return MixedJet2::constant(n, 1.0);
    int slot = 0;
    for (int u = 0; u <= n; ++u) {
      if (u == x.chart) continue;
      if (u == t) break;
      ++slot;
    }
    return MixedJet2::coordinate(n, slot, x.z(slot));
  };
  const MixedJet2 num = jet_mul(hom_jet(j), jet_conj(hom_jet(k)));
  return jet_mul(num, jet_reciprocal(one_plus_norm2_jet(x)));
}

/// A named C^2 test function with jets in any chart.
struct TestFunction {
  std::string name;
  std::function<MixedJet2(const ChartPoint&)> jet;
  double c2_norm = 1.0;  // filled by quadrature of derivative jets

  double operator()(const ChartPoint& x) const { return jet(x).value().real(); }
};

}  // namespace kodaira

#endif
