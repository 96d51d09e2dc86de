#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "geoconn/errors.hpp"
#include "geoconn/manifold.hpp"
#include "geoconn/model_config.hpp"
#include "geoconn/models.hpp"
#include "helpers.hpp"

using namespace geoconn;
using support::builtin_zoo;
using support::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

}  // namespace

TEST(Metric, EuclideanIsIdentity) {
  auto m = make_model("euclidean", {2});
  EXPECT_EQ(metric_eval(*m, v2(0.3, -1)), Mat::Identity(2, 2));
}

TEST(Metric, SphereAtEquatorIsIdentity) {
  auto m = make_model("sphere2");
  const Mat g = metric_eval(*m, v2(kPi / 2, 0));
  EXPECT_NEAR(g(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(g(1, 1), 1.0, 1e-15);
  EXPECT_EQ(g(0, 1), 0.0);
}

TEST(Metric, SphereMatchesEmbeddingPullback) {
  auto m = make_model("sphere2");
  const Vec x = v2(0.9, 2.1);
  const Mat J = m->embed_jacobian(x);
  EXPECT_LT(max_abs(metric_eval(*m, x) - J.transpose() * J), 1e-14);
}

TEST(Metric, MinkowskiIsDiagonalSignature) {
  auto m = make_model("minkowski", {2});
  const Mat g = metric_eval(*m, v2(5, -7));
  EXPECT_EQ(g(0, 0), 1.0);
  EXPECT_EQ(g(1, 1), -1.0);
  EXPECT_EQ(g(0, 1), 0.0);
}

TEST(Metric, OutsideChartThrows) {
  auto m = make_model("sphere2");
  EXPECT_THROW(metric_eval(*m, v2(-0.1, 0)), OutOfChart);
  EXPECT_THROW(metric_eval(*m, v2(kPi + 0.1, 0)), OutOfChart);
}

TEST(Metric, DegenerateDslMetricThrows) {
  auto m = make_dsl_model("deg", {1, 1}, {{{1, 1}, "1"}, {{2, 2}, "x1^2"}});
  EXPECT_NO_THROW(metric_eval(*m, v2(0.5, 0)));
  // x1 = 0 makes g_22 vanish; such points are outside the chart
  EXPECT_THROW(metric_eval(*m, v2(0, 0)), Error);
}

TEST(Christoffel, EuclideanVanishes) {
  for (int n : {1, 2, 3, 4}) {
    auto m = make_model("euclidean", {n});
    EXPECT_EQ(christoffel_eval(*m, Vec::Constant(n, 0.4)).max_abs(), 0.0);
  }
}

TEST(Christoffel, SphereClosedForm) {
  auto m = make_model("sphere2");
  for (double th : {0.3, 1.0, kPi / 2, 2.5}) {
    const auto G = christoffel_eval(*m, v2(th, 0.7));
    EXPECT_NEAR(G(0, 1, 1), -std::sin(th) * std::cos(th), 1e-14);
    EXPECT_NEAR(G(1, 0, 1), std::cos(th) / std::sin(th), 1e-14);
    EXPECT_NEAR(G(1, 1, 0), std::cos(th) / std::sin(th), 1e-14);
    EXPECT_EQ(G(0, 0, 0), 0.0);
    EXPECT_EQ(G(0, 0, 1), 0.0);
    EXPECT_EQ(G(1, 0, 0), 0.0);
    EXPECT_EQ(G(1, 1, 1), 0.0);
  }
}

TEST(Christoffel, DslWarpedMetricByHand) {
  // g = diag(1, x1^2): Gamma^1_22 = -x1, Gamma^2_12 = 1 / x1
  auto m = make_dsl_model("warped", {1, 1}, {{{1, 1}, "1"}, {{2, 2}, "x1^2"}});
  const auto G = christoffel_eval(*m, v2(2, 0));
  EXPECT_NEAR(G(0, 1, 1), -2.0, 1e-8);
  EXPECT_NEAR(G(1, 0, 1), 0.5, 1e-8);
  EXPECT_NEAR(G(1, 1, 0), 0.5, 1e-8);
  EXPECT_NEAR(G(0, 0, 0), 0.0, 1e-8);
  EXPECT_NEAR(G(1, 1, 1), 0.0, 1e-8);
}

TEST(Christoffel, FiniteDifferenceMatchesAnalytic) {
  for (const auto& [label, m] : builtin_zoo()) {
    if (!m->has_analytic_christoffel()) continue;
    for (const Vec& x : sample_chart_points(*m, 25, 11)) {
      const auto a = m->christoffel(x);
      const auto f = m->christoffel_fd(x);
      EXPECT_LT(a.max_abs_diff(f), 1e-5) << label;
    }
  }
}

TEST(Christoffel, DerivativesMatchFiniteDifferences) {
  for (const auto& [label, m] : builtin_zoo()) {
    for (const Vec& x : sample_chart_points(*m, 25, 12)) {
      const auto a = m->christoffel_derivatives(x);
      const auto f = m->christoffel_derivatives_fd(x);
      ASSERT_EQ(a.size(), static_cast<std::size_t>(m->dim()));
      for (std::size_t l = 0; l < a.size(); ++l) {
        EXPECT_LT(a[l].max_abs_diff(f[l]), 1e-6 * std::max(1.0, a[l].max_abs())) << label;
      }
    }
  }
}

TEST(Christoffel, SphereDerivativesNearThePole) {
  auto m = make_model("sphere2");
  const double t = 1e-3;
  const auto d = m->christoffel_derivatives(v2(t, 0.4));
  EXPECT_NEAR(d[0](1, 0, 1), -1.0 / (std::sin(t) * std::sin(t)), 1e-6);
  EXPECT_NEAR(d[0](0, 1, 1), -std::cos(2 * t), 1e-15);
  EXPECT_EQ(d[1].max_abs(), 0.0);
}

TEST(Christoffel, StencilOutsideChartThrows) {
  auto m = make_dsl_model("half", {1, 1}, {{{1, 1}, "1"}, {{2, 2}, "1"}},
                          v2(0, -std::numeric_limits<double>::infinity()),
                          v2(std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()));
  EXPECT_THROW(christoffel_eval(*m, v2(1e-7, 0)), OutOfChart);
  EXPECT_NO_THROW(christoffel_eval(*m, v2(1, 0)));
}

TEST(ModelInvariants, SymmetrySignatureAndLowerIndexSymmetry) {
  for (const auto& [label, m] : builtin_zoo()) {
    for (const Vec& x : sample_chart_points(*m, 100, 3)) {
      const Mat g = metric_eval(*m, x);
      EXPECT_EQ(max_abs(g - g.transpose()), 0.0) << label;
      Eigen::SelfAdjointEigenSolver<Mat> es(g);
      int neg = 0;
      for (Eigen::Index i = 0; i < g.rows(); ++i) {
        EXPECT_GT(std::abs(es.eigenvalues()[i]), 1e-12) << label;
        neg += es.eigenvalues()[i] < 0;
      }
      int declared = 0;
      for (int s : m->signature()) declared += s < 0;
      EXPECT_EQ(neg, declared) << label;
      EXPECT_LT(christoffel_eval(*m, x).lower_asymmetry(), 1e-10) << label;
    }
  }
}

TEST(Inner, NullVectorOfMinkowskiPlane) {
  auto m = make_model("minkowski", {2});
  EXPECT_EQ(inner(*m, v2(0, 0), v2(1, 1), v2(1, 1)), 0.0);
}

TEST(Inner, EuclideanThree) {
  auto m = make_model("euclidean", {3});
  EXPECT_EQ(inner(*m, v3(0, 0, 0), v3(1, 2, 2), v3(1, 2, 2)), 9.0);
}

TEST(Inner, SphereAzimuthalComponent) {
  auto m = make_model("sphere2");
  EXPECT_NEAR(inner(*m, v2(kPi / 6, 0), v2(0, 1), v2(0, 1)), 0.25, 1e-15);
}

TEST(Inner, BilinearAndSymmetric) {
  auto m = make_model("desitter");
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vec x = support::random_vec(rng, 2, 2);
    const Vec a = support::random_vec(rng, 2), b = support::random_vec(rng, 2),
              c = support::random_vec(rng, 2);
    EXPECT_NEAR(inner(*m, x, a, b), inner(*m, x, b, a), 1e-14);
    EXPECT_NEAR(inner(*m, x, 2 * a + c, b), 2 * inner(*m, x, a, b) + inner(*m, x, c, b), 1e-12);
  }
}

TEST(Inner, OutsideChartThrows) {
  auto m = make_model("sphere2");
  EXPECT_THROW(inner(*m, v2(-1, 0), v2(1, 0), v2(1, 0)), OutOfChart);
}

TEST(CausalClass, MinkowskiPlane) {
  auto m = make_model("minkowski", {2});
  const Vec o = v2(0, 0);
  EXPECT_EQ(causal_class(*m, o, v2(0, 1)), CausalClass::Timelike);
  EXPECT_EQ(causal_class(*m, o, v2(1, 0)), CausalClass::Spacelike);
  EXPECT_EQ(causal_class(*m, o, v2(1, 1)), CausalClass::Null);
  EXPECT_EQ(causal_class(*m, o, v2(0, 0)), CausalClass::Null);
}

TEST(OrthonormalFrame, DiagonalizesMetric) {
  for (const auto& [label, m] : builtin_zoo()) {
    const Vec x = sample_chart_points(*m, 1, 9).front();
    const Mat F = orthonormal_frame(*m, x);
    const Mat G = F.transpose() * metric_eval(*m, x) * F;
    Mat expected = Mat::Identity(m->dim(), m->dim());
    int neg = 0;
    for (int s : m->signature()) neg += s < 0;
    for (int i = m->dim() - neg; i < m->dim(); ++i) expected(i, i) = -1;
    EXPECT_LT(max_abs(G - expected), 1e-12) << label;
  }
}

TEST(Auxiliary, MinkowskiPlaneGivesIdentity) {
  auto m = make_model("minkowski", {2});
  auto h = auxiliary_riemannian(m, {"dt", [](const Vec&) { return v2(0, 1); }});
  EXPECT_TRUE(h->is_riemannian());
  EXPECT_LT(max_abs(metric_eval(*h, v2(0.3, 0.4)) - Mat::Identity(2, 2)), 1e-15);
}

TEST(Auxiliary, MinkowskiThreeGivesIdentity) {
  auto m = make_model("minkowski", {3});
  auto h = auxiliary_riemannian(m, {"dt", [](const Vec&) { return v3(0, 0, 1); }});
  EXPECT_LT(max_abs(metric_eval(*h, v3(1, 2, 3)) - Mat::Identity(3, 3)), 1e-15);
}

TEST(Auxiliary, OrthogonalVectorsKeepTheirNorm) {
  auto m = make_model("desitter");
  auto V = timelike_eigenfield(m);
  auto h = auxiliary_riemannian(m, V);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Vec x = support::random_vec(rng, 2, 2);
    const Vec Vx = V.eval(x);
    Vec X = support::random_vec(rng, 2);
    X -= inner(*m, x, Vx, X) / inner(*m, x, Vx, Vx) * Vx;  // g(V, X) = 0
    EXPECT_NEAR(inner(*h, x, X, X), inner(*m, x, X, X), 1e-12);
  }
}

TEST(Auxiliary, RescalesAndReversesInnerProducts) {
  auto m = make_model("minkowski", {3});
  // g(V, V) = -4 before rescaling
  auto h = auxiliary_riemannian(m, {"2dt", [](const Vec&) { return v3(0, 0, 2); }});
  std::mt19937_64 rng(3);
  const Vec V = v3(0, 0, 1);
  for (int k = 0; k < 50; ++k) {
    const Vec x = support::random_vec(rng, 3, 3);
    const Vec X = support::random_vec(rng, 3, 2);
    EXPECT_NEAR(inner(*h, x, V, X) + inner(*m, x, V, X), 0.0, 1e-12);
    EXPECT_NEAR(inner(*h, x, V, V), 1.0, 1e-12);
  }
}

TEST(Auxiliary, SpacelikeFieldRejected) {
  auto m = make_model("minkowski", {2});
  EXPECT_THROW(auxiliary_riemannian(m, {"dx", [](const Vec&) { return v2(1, 0); }}), NotTimelike);
}

TEST(Auxiliary, PositiveDefiniteOnDeSitter) {
  auto m = make_model("desitter");
  auto h = auxiliary_riemannian(m, timelike_eigenfield(m));
  for (const Vec& x : sample_chart_points(*m, 100, 4)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(metric_eval(*h, x));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Registry, EuclideanThree) {
  auto m = make_model("euclidean", {3});
  EXPECT_EQ(m->dim(), 3);
  EXPECT_TRUE(m->is_riemannian());
}

TEST(Registry, DeSitterLiesOnHyperboloid) {
  auto m = make_model("desitter");
  EXPECT_EQ(m->ambient_dim(), 3);
  EXPECT_EQ(m->ambient_form(), AmbientForm::Minkowski);
  for (const Vec& x : sample_chart_points(*m, 50, 8)) {
    const Vec X = m->embed(x);
    EXPECT_NEAR(support::minkowski_dot(X, X), 1.0, 1e-12);
    // induced metric is the pullback of the ambient Minkowski form
    const Mat J = m->embed_jacobian(x);
    Mat eta = Mat::Identity(3, 3);
    eta(2, 2) = -1;
    EXPECT_LT(max_abs(metric_eval(*m, x) - J.transpose() * eta * J), 1e-12);
  }
}

TEST(Registry, CliftonPohlNondegenerateOnGrid) {
  auto m = make_model("clifton_pohl");
  EXPECT_FALSE(m->metadata().empty());
  for (int i = -10; i <= 10; ++i) {
    for (int j = -10; j <= 10; ++j) {
      if (i == 0 && j == 0) continue;
      const Vec x = v2(0.3 * i, 0.3 * j);
      const Mat g = metric_eval(*m, x);
      const double r2 = x.squaredNorm();
      EXPECT_NEAR(g(0, 1), 1.0 / r2, 1e-12);
      EXPECT_EQ(g(0, 0), 0.0);
      EXPECT_LT(g.determinant(), 0.0);
    }
  }
  EXPECT_FALSE(m->in_chart(v2(0, 0)));
}

TEST(Registry, UnknownNameThrows) {
  EXPECT_THROW(make_model("torus"), UnknownModel);
  EXPECT_THROW(make_model("desitter", {3}), ConfigError);
}

TEST(Registry, ListingCoversEveryBuiltin) {
  for (const auto& info : builtin_models()) {
    EXPECT_NO_THROW(make_model(info.name)) << info.name;
    EXPECT_EQ(make_model(info.name)->has_oracle(), info.oracle) << info.name;
  }
}

TEST(Registry, ReferencePointsAreChartPoints) {
  for (const auto& [label, m] : builtin_zoo()) EXPECT_TRUE(m->in_chart(reference_point(*m))) << label;
}

TEST(Config, DslModelFromText) {
  const auto cfg = parse_model_config(R"(
# warped product
[manifold]
type = dsl
name = warped
dim = 2
signature = +,+
g_1_1 = "1"
g_2_2 = "x1^2"
lower = 0.1, -inf
)");
  EXPECT_EQ(cfg.type, "dsl");
  EXPECT_EQ(cfg.dim, 2);
  auto m = build_model(cfg);
  EXPECT_EQ(m->name(), "warped");
  EXPECT_NEAR(metric_eval(*m, v2(3, 1))(1, 1), 9.0, 1e-12);
  EXPECT_FALSE(m->in_chart(v2(0.05, 0)));
}

TEST(Config, BuiltinFromText) {
  auto m = build_model(parse_model_config("[manifold]\ntype = builtin\nname = minkowski\ndim = 3\n"));
  EXPECT_EQ(m->name(), "minkowski");
  EXPECT_EQ(m->dim(), 3);
}

TEST(Config, UnknownKeysAndSectionsRejected) {
  EXPECT_THROW(parse_model_config("[manifold]\ntype = dsl\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse_model_config("[metric]\ntype = dsl\n"), ConfigError);
  EXPECT_THROW(parse_model_config("[manifold]\ng_1_3 = \"1\"\ndim = 2\ntype = dsl\nname = a\n"
                                  "signature = +,+\n"),
               ConfigError);
}

TEST(Config, SignatureSpellings) {
  EXPECT_EQ(parse_signature("+,+,-"), (std::vector<int>{1, 1, -1}));
  EXPECT_EQ(parse_signature("1, -1"), (std::vector<int>{1, -1}));
  EXPECT_THROW(parse_signature("+,0"), ConfigError);
}

TEST(Config, SyntaxErrorInComponentIsReported) {
  EXPECT_THROW(build_model(parse_model_config("[manifold]\ntype = dsl\nname = bad\ndim = 2\n"
                                              "signature = +,+\ng_1_1 = \"1 +\"\ng_2_2 = \"1\"\n")),
               Error);
}

TEST(ChartDifference, WrapsPeriodicCoordinates) {
  auto m = make_model("sphere2");
  const Vec d = m->chart_difference(v2(1, 3.0), v2(1, -3.0));
  EXPECT_NEAR(d[1], 6.0 - 2 * kPi, 1e-14);
  EXPECT_NEAR(d[0], 0.0, 0.0);
}
