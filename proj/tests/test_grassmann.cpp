#include <catch2/catch_amalgamated.hpp>

#include "kodaira/grassmann.hpp"
#include "kodaira/rng.hpp"

using namespace kodaira;

namespace {

GrassChartPoint random_chart_point(int r, int m, RngStream& rng, double scale = 1.0) {
  GrassChartPoint w;
  w.r = r;
  w.m = m;
  w.Z.resize(r, m - r);
  for (int j = 0; j < r; ++j)
    for (int l = 0; l < m - r; ++l)
      w.Z(j, l) = scale * cxd(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
  return w;
}

}  // namespace

TEST_CASE("universal metric basics") {
  RngStream rng(3);
  // r=1, m=2: K = 1 + |z|^2, the O(-1) metric on CP^1.
  GrassChartPoint w;
  w.r = 1;
  w.m = 2;
  w.Z = MatrixXcd::Constant(1, 1, cxd(0.5, -0.25));
  const MatrixJet k = universal_metric(w);
  REQUIRE(std::abs(k.value()(0, 0) - (1.0 + std::norm(w.Z(0, 0)))) < 1e-15);

  // H K^T = identity at the value level; K positive definite.
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + trial % 3;
    const int m = r + 1 + trial % 3;
    const GrassChartPoint wp = random_chart_point(r, m, rng);
    const MatrixJet kk = universal_metric(wp);
    const MatrixJet hh = dual_universal_metric(wp);
    REQUIRE((hh.value() * kk.value().transpose() - MatrixXcd::Identity(r, r))
                .lpNorm<Eigen::Infinity>() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(kk.value());
    REQUIRE(es.eigenvalues().minCoeff() >= 1.0 - 1e-12);  // Gram form I + ZZ*
    REQUIRE(kk.is_hermitian(1e-12));
    REQUIRE(hh.is_hermitian(1e-12));
  }

  // r=1, m=2 dual: H = (1+|z|^2)^{-1}, matching the O(1) FS weight jet.
  const MatrixJet h = dual_universal_metric(w);
  ChartPoint x{0, VectorXcd::Constant(1, w.Z(0, 0))};
  const MixedJet2 ref = fs_weight_jet(x);
  const MixedJet2 got = h.entry(0, 0);
  REQUIRE(std::abs(got.value() - ref.value()) < 1e-14);
  REQUIRE((got.d() - ref.d()).cwiseAbs().maxCoeff() < 1e-13);
  REQUIRE((got.mixed() - ref.mixed()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("chart-center curvature identities") {
  // At W_0 = 0: R^T*(W_0)_{kj} = sum_l dz_{jl} ^ dzbar_{kl} exactly, i.e. the
  // normalized form iR/2pi has e-basis coefficient 1/2pi at ((j,l),(k,l)).
  for (auto [r, m] : std::vector<std::pair<int, int>>{{1, 3}, {2, 4}, {2, 5}, {3, 6}}) {
    GrassChartPoint w0;
    w0.r = r;
    w0.m = m;
    w0.Z = MatrixXcd::Zero(r, m - r);
    const GrassCurvatures c = curvature_dual_universal(w0);
    const double s = 1.0 / (2.0 * M_PI);
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < r; ++j) {
        MatrixXcd expect_dual = MatrixXcd::Zero(w0.coords(), w0.coords());
        MatrixXcd expect_tan = MatrixXcd::Zero(w0.coords(), w0.coords());
        for (int l = 0; l < m - r; ++l) {
          expect_dual(w0.coord_index(j, l), w0.coord_index(k, l)) = s;
          expect_tan(w0.coord_index(k, l), w0.coord_index(j, l)) = -s;
        }
        REQUIRE((c.dual.entry(k, j).coeff() - expect_dual).lpNorm<Eigen::Infinity>() < 1e-13);
        REQUIRE((c.tangent.entry(k, j).coeff() - expect_tan).lpNorm<Eigen::Infinity>() < 1e-13);
      }

    // c_1(T*)(W_0) = (i/2pi) sum_{j,l} dz_{jl} ^ dzbar_{jl}.
    const FormAtPoint c1 = chern_form_dual_universal(1, w0);
    REQUIRE((c1.coeff() - s * MatrixXcd::Identity(w0.coords(), w0.coords())).norm() < 1e-13);
    REQUIRE(std::abs(chern_form_dual_universal(0, w0).coeff()(0, 0) - 1.0) < 1e-15);
  }
}

TEST_CASE("duality R^T* = -(R^T)^T at random chart points") {
  RngStream rng(41);
  for (auto [r, m] : std::vector<std::pair<int, int>>{{1, 3}, {2, 4}, {2, 5}, {3, 6}}) {
    for (int trial = 0; trial < 250; ++trial) {
      const GrassChartPoint w = random_chart_point(r, m, rng);
      const GrassCurvatures c = curvature_dual_universal(w);
      double worst = 0.0;
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) {
          const MatrixXcd diff = c.dual.entry(j, k).coeff() + c.tangent.entry(k, j).coeff();
          worst = std::max(worst, diff.lpNorm<Eigen::Infinity>());
        }
      REQUIRE(worst < 1e-12);
    }
  }
}

TEST_CASE("G(1,m) specializations") {
  RngStream rng(12);
  // c_1(T*) on G(1,m) equals the FS form of P^{m-1} pointwise.
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      const GrassChartPoint w = random_chart_point(1, m, rng);
      ChartPoint x{0, w.Z.row(0).transpose()};
      const FormAtPoint c1 = chern_form_dual_universal(1, w);
      REQUIRE((c1.coeff() - fs_form(x).coeff()).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  // Line integral: int c_1(T*) over a projective line in G(1,m) = 1.
  const QuadratureRule rule = cp1_rule(64, 16);
  for (int m : {2, 3, 4, 6}) {
    REQUIRE(std::abs(dual_universal_line_integral(m, rule) - 1.0) < 1e-10);
  }
}

TEST_CASE("positivity of c_1(T*) at random chart points") {
  RngStream rng(2718);
  for (auto [r, m] :
       std::vector<std::pair<int, int>>{{1, 3}, {2, 4}, {2, 5}, {3, 5}, {3, 6}}) {
    for (int trial = 0; trial < 200; ++trial) {
      const GrassChartPoint w = random_chart_point(r, m, rng, 1.5);
      const FormAtPoint c1 = chern_form_dual_universal(1, w);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c1.coeff());
      REQUIRE(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("unitary invariance of c_1(T*) pairings on G(1,3)") {
  // Pairing a test function with c_1(T*) on G(1,3) = P^2 is unchanged when
  // the function is precomposed with a unitary change of basis of C^3.
  RngStream rng(515);
  MatrixXcd g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.next_complex_gaussian();
  const Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd u = qr.householderQ();

  auto phi = [](const ChartPoint& x) {
    const double t0 = homogeneous_ratio_jet(x, 0).value().real();
    const double re = homogeneous_pair_jet(x, 1, 2).value().real();
    return cxd(std::exp(-2.0 * t0) + 0.5 * re, 0.0);
  };
  auto phi_rotated = [&](const ChartPoint& x) {
    const VectorXcd h = u * homogeneous(x);
    ChartPoint y;
    y.chart = 0;
    int c = 0;
    for (int j = 1; j < 3; ++j)
      if (std::abs(h(j)) > std::abs(h(c))) c = j;
    y.chart = c;
    y.z.resize(2);
    int k = 0;
    for (int j = 0; j < 3; ++j)
      if (j != c) y.z(k++) = h(j) / h(c);
    return phi(y);
  };

  // c_1(T*) on G(1,3) is omega_FS of P^2, so pair against the FS volume.
  const QuadratureRule rule = cp2_rule(14, 14, 14);
  auto pair_against_c1 = [&](const std::function<cxd(const ChartPoint&)>& f) {
    return integrate_form(
        [&](const ChartPoint& x) {
          GrassChartPoint w;
          w.r = 1;
          w.m = 3;
          w.Z = x.z.transpose();
          const FormAtPoint c1 = chern_form_dual_universal(1, w);
          const FormAtPoint om = fs_form(x);
          return f(x) * wedge(c1, om).top();
        },
        rule);
  };
  const cxd lhs = pair_against_c1(phi);
  const cxd rhs = pair_against_c1(phi_rotated);
  REQUIRE(std::abs(lhs - rhs) < 1e-6);
}
