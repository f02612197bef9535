#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wulff_lab/wulff_lab.hpp"

using namespace wulff_lab;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

VectorXd vx(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<FinslerNorm2> sample_norms() {
  Eigen::Matrix2d a;
  a << 2.0, 0.3, 0.3, 0.5;
  return {FinslerNorm2::euclidean(), FinslerNorm2::elliptic_axes({1.0, 2.0}), FinslerNorm2::elliptic(a),
          FinslerNorm2::lp(3.0), FinslerNorm2::lp(1.5)};
}

// 4th-order central difference gradient of a scalar function
template <class Fn>
Vector2d fd_gradient(Fn&& fn, const Vector2d& x, double h = 1e-3) {
  Vector2d g;
  for (int i = 0; i < 2; ++i) {
    Vector2d e = Vector2d::Zero();
    e[i] = h;
    g[i] = (-fn(x + 2 * e) + 8 * fn(x + e) - 8 * fn(x - e) + fn(x - 2 * e)) / (12 * h);
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

TEST(Norm, EvaluatesClosedForms) {
  EXPECT_DOUBLE_EQ(FinslerNorm2::euclidean()(Vector2d(3, 4)), 5.0);
  EXPECT_NEAR(FinslerNorm2::elliptic_axes({1, 2})(Vector2d(0, 2)), 1.0, 1e-15);
  EXPECT_NEAR(FinslerNorm2::lp(3)(Vector2d(1, 1)), std::cbrt(2.0), 1e-15);
  EXPECT_EQ(FinslerNorm2::lp(3)(Vector2d::Zero()), 0.0);
}

TEST(Norm, PolarClosedForms) {
  EXPECT_DOUBLE_EQ(FinslerNorm2::euclidean().polar(Vector2d(3, 4)), 5.0);
  EXPECT_NEAR(FinslerNorm2::elliptic_axes({1, 2}).polar(Vector2d(0, 1)), 2.0, 1e-15);
  EXPECT_NEAR(FinslerNorm2::lp(3).polar(Vector2d(1, 1)), std::pow(2.0, 2.0 / 3.0), 1e-14);
}

TEST(Norm, PolarMatchesSupOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& n : sample_norms())
    for (int k = 0; k < 20; ++k) {
      const Vector2d v(u(rng), u(rng));
      EXPECT_NEAR(generic_polar(n, VectorXd(v)), n.polar(v), 1e-9 * (1 + n.polar(v)));
      EXPECT_NEAR(generic_bipolar(n, VectorXd(v)), n(v), 1e-6 * n(v));
    }
  // lp q=3 at (1,1) through the oracle alone
  EXPECT_NEAR(generic_polar(FinslerNorm2::lp(3), vx({1, 1})), std::pow(2.0, 2.0 / 3.0), 1e-9);
}

TEST(Norm, PolarOracleInThreeDimensions) {
  Eigen::Matrix3d a;
  a << 2, 0.2, 0, 0.2, 1, 0.1, 0, 0.1, 0.5;
  const auto norm = FinslerNormX::elliptic(a);
  const VectorXd v = vx({0.3, -1.0, 0.7});
  EXPECT_NEAR(generic_polar(norm, v), norm.polar(v), 1e-8);
}

TEST(Norm, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& n : sample_norms())
    for (int k = 0; k < 20; ++k) {
      Vector2d x(u(rng), u(rng));
      // keep away from the axes, where lp norms with q < 2 lose smoothness
      for (int i = 0; i < 2; ++i)
        if (std::abs(x[i]) < 0.3) x[i] += x[i] < 0 ? -0.3 : 0.3;
      const Vector2d g = fd_gradient([&](const Vector2d& y) { return n(y); }, x);
      const Vector2d gp = fd_gradient([&](const Vector2d& y) { return n.polar(y); }, x);
      EXPECT_LE((n.grad(x) - g).norm(), 1e-7 * g.norm());
      EXPECT_LE((n.polar_grad(x) - gp).norm(), 1e-7 * gp.norm());
    }
}

TEST(Norm, GradientExamples) {
  EXPECT_LE((FinslerNorm2::euclidean().grad(Vector2d(0, 2)) - Vector2d(0, 1)).norm(), 1e-15);
  EXPECT_LE((FinslerNorm2::elliptic_axes({1, 2}).grad(Vector2d(1, 0)) - Vector2d(1, 0)).norm(), 1e-15);
  for (const auto& n : sample_norms()) {
    const Vector2d x(0.4, -1.3);
    EXPECT_LE((n.grad(x) - n.grad(2 * x)).norm(), 1e-14);
    EXPECT_NEAR(n.grad(x).dot(x), n(x), 1e-14);  // Euler identity
  }
}

TEST(Norm, ZeroVectorGradientIsAnError) {
  const auto n = FinslerNorm2::elliptic_axes({1, 2});
  try {
    (void)n.grad(Vector2d(1e-16, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::zero_vector);
  }
  EXPECT_THROW((void)n.polar_grad(Vector2d::Zero()), Error);
}

TEST(Norm, DualityIdentities) {
  EXPECT_LE(check_duality(FinslerNorm2::euclidean(), Vector2d(0.3, -2)).max(), 1e-15);
  EXPECT_LE(check_duality(FinslerNorm2::elliptic_axes({1, 2}), Vector2d(1, 1)).max(), 1e-12);
  EXPECT_LE(check_duality(FinslerNorm2::lp(3), Vector2d(2, -1)).max(), 1e-9);
}

TEST(Norm, HomogeneityAndCauchySchwarz) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const auto& n : sample_norms())
    for (int k = 0; k < 1000; ++k) {
      const Vector2d xi(u(rng), u(rng)), eta(u(rng), u(rng));
      const double t = u(rng);
      EXPECT_LE(std::abs(n(t * xi) - std::abs(t) * n(xi)), 1e-12 * (1 + n(xi)));
      EXPECT_LE(std::abs(xi.dot(eta)), n(xi) * n.polar(eta) * (1 + 1e-12));
    }
}

TEST(Norm, BoundsEnclosePointwiseRatios) {
  for (const auto& n : sample_norms()) {
    EXPECT_GT(n.lower_bound(), 0.0);
    // {F° ≤ 1} is flat at the axes when F is an lp norm with q < 2
    if (n.kind() != NormKind::lp || n.exponent() >= 2) EXPECT_GT(n.wulff_curvature_bound(), 0.0);
    else EXPECT_EQ(n.wulff_curvature_bound(), 0.0);
    for (int k = 0; k < 720; ++k) {
      const Vector2d u = unit_at(2 * pi * k / 720);
      EXPECT_GE(n(u), n.lower_bound() * (1 - 1e-12));
      EXPECT_LE(n(u), n.upper_bound() * (1 + 1e-12));
    }
  }
  const auto e = FinslerNorm2::elliptic_axes({1, 2});
  EXPECT_NEAR(e.lower_bound(), 0.5, 1e-12);
  EXPECT_NEAR(e.upper_bound(), 1.0, 1e-12);
}

TEST(Norm, UnitWulffVolume) {
  EXPECT_NEAR(FinslerNorm2::euclidean().unit_wulff_volume(), pi, 1e-14);
  EXPECT_NEAR(FinslerNorm2::elliptic_axes({1, 2}).unit_wulff_volume(), pi / 2, 1e-14);
  EXPECT_NEAR(FinslerNormX::euclidean(3).unit_wulff_volume(), 4 * pi / 3, 1e-13);
  EXPECT_NEAR(FinslerNormX::elliptic_axes({1, 2, 3}).unit_wulff_volume(), 4 * pi / 3 / 6, 1e-13);
  // lp: area of {|x|^r + |y|^r ≤ 1} with r the dual exponent, 4 Γ(1+1/r)² / Γ(1+2/r)
  const double r = 1.5;
  const double area = 4 * std::pow(std::tgamma(1 + 1 / r), 2) / std::tgamma(1 + 2 / r);
  EXPECT_NEAR(FinslerNorm2::lp(3).unit_wulff_volume(), area, 1e-9);
}

TEST(Norm, RejectsNonsmoothOrIndefinite) {
  EXPECT_THROW(FinslerNorm2::lp(1.0), Error);
  EXPECT_THROW(FinslerNorm2::lp(std::numeric_limits<double>::infinity()), Error);
  Eigen::Matrix2d bad;
  bad << 1, 2, 2, 1;
  EXPECT_THROW(FinslerNorm2::elliptic(bad), Error);
  EXPECT_THROW(FinslerNorm2::elliptic_axes({1, -2}), Error);
}

// ---------------------------------------------------------------------------
// Angle grid
// ---------------------------------------------------------------------------

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(AngleGrid(32), Error);
  EXPECT_THROW(AngleGrid(100), Error);
  EXPECT_NO_THROW(AngleGrid(64));
}

TEST(Grid, StencilsAreFourthOrder) {
  auto err = [](int n) {
    AngleGrid g(n);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[j] = std::exp(std::sin(g.theta(j)));
    auto d2 = periodic_d2(v, g.step());
    double e = 0;
    for (int j = 0; j < n; ++j) {
      const double s = std::sin(g.theta(j)), c = std::cos(g.theta(j));
      e = std::max(e, std::abs(d2[j] - std::exp(s) * (c * c - s)));
    }
    return e;
  };
  EXPECT_GT(std::log2(err(64) / err(128)), 3.8);
}

TEST(Grid, InterpolationReproducesSmoothData) {
  AngleGrid g(256);
  std::vector<double> v(256);
  for (int j = 0; j < 256; ++j) v[j] = std::cos(3 * g.theta(j));
  const auto lv = periodic_interpolate(v, g.step(), 0.123);
  EXPECT_NEAR(lv.value, std::cos(0.369), 1e-10);
  EXPECT_NEAR(lv.derivative, -3 * std::sin(0.369), 1e-8);
}

// ---------------------------------------------------------------------------
// Bodies
// ---------------------------------------------------------------------------

TEST(Bodies, WulffSupportFunctions) {
  const AngleGrid g(256);
  const auto disk = wulff(FinslerNorm2::euclidean(), 1.0, Vector2d::Zero(), g);
  for (double h : disk.support()) EXPECT_NEAR(h, 1.0, 1e-15);
  const auto shifted = wulff(FinslerNorm2::euclidean(), 1.0, Vector2d(0.3, 0), g);
  for (int j = 0; j < g.size(); ++j) EXPECT_NEAR(shifted.support()[j], 1 + 0.3 * std::cos(g.theta(j)), 1e-15);
  const auto e = FinslerNorm2::elliptic_axes({1, 2});
  const auto w = wulff(e, 1.0, Vector2d::Zero(), g);
  for (int j = 0; j < g.size(); ++j) {
    const double c = std::cos(g.theta(j)), s = std::sin(g.theta(j));
    EXPECT_NEAR(w.support()[j], std::sqrt(c * c + s * s / 4), 1e-15);
  }
}

TEST(Bodies, WulffBoundaryLiesOnPolarLevelSet) {
  for (const auto& n : sample_norms()) {
    const auto w = wulff(n, 1.7, Vector2d::Zero(), AngleGrid(1024));
    // F(u(θ)) is only C² at the axes for lp(1.5), which limits the stencil accuracy of h'
    const double tol = n.kind() == NormKind::lp && n.exponent() < 2 ? 1e-6 : 1e-8;
    for (int j = 0; j < w.size(); ++j) EXPECT_NEAR(n.polar(w.point(j)), 1.7, tol);
  }
}

TEST(Bodies, SupportConsistency) {
  const auto c = from_fourier(AngleGrid(512), 1.0, {{0.1, -0.05}, {0.05, 0.02}, {0.0, 0.01}});
  for (int j = 0; j < c.size(); j += 17) {
    double best = -1e300;
    for (int i = 0; i < c.size(); ++i) best = std::max(best, c.point(i).dot(c.normal(j)));
    EXPECT_NEAR(best, c.support()[j], 1e-8);
  }
}

TEST(Bodies, FourierConvexityCheck) {
  const AngleGrid g(256);
  const auto disk = from_fourier(g, 1.0, {});
  EXPECT_NEAR(disk.min_radius_of_curvature(), 1.0, 1e-12);
  const auto oval = from_fourier(g, 1.0, {{0, 0}, {0.1, 0}});
  EXPECT_NEAR(oval.min_radius_of_curvature(), 0.7, 1e-7);
  try {
    (void)from_fourier(g, 1.0, {{0, 0}, {0.4, 0}});
    FAIL() << "expected NotConvex";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_convex);
    EXPECT_NE(std::string(e.what()).find("node 0"), std::string::npos);
  }
}

TEST(Bodies, EllipticWulffCurvatureMatchesParametricEllipse) {
  // ellipse x² + 4y² = 1, semi-axes A=1, B=1/2: κ at (±A, 0) is A/B² = 4 and at (0, ±B) is B/A² = 1/2
  const auto w = wulff(FinslerNorm2::elliptic_axes({1, 2}), 1.0, Vector2d::Zero(), AngleGrid(1024));
  EXPECT_NEAR(w.curvature(0), 4.0, 1e-6);
  EXPECT_NEAR(w.curvature_at(pi / 2), 0.5, 1e-6);
  // general parametric check κ(t) = AB / (A² sin² t + B² cos² t)^{3/2} at the point with normal angle θ
  for (double theta : {0.3, 1.1, 2.5}) {
    const Vector2d x = w.point_at(theta);
    const double t = std::atan2(x.y() / 0.5, x.x());
    const double kappa = 0.5 / std::pow(std::sin(t) * std::sin(t) + 0.25 * std::cos(t) * std::cos(t), 1.5);
    EXPECT_NEAR(w.curvature_at(theta), kappa, 1e-6 * kappa);
  }
}

TEST(Bodies, TranslationKeepsCurvature) {
  const auto d = wulff(FinslerNorm2::euclidean(), 1.0, Vector2d(0.3, 0), AngleGrid(512));
  for (int j = 0; j < d.size(); ++j) EXPECT_NEAR(d.curvature(j), 1.0, 1e-10);
}

TEST(Bodies, BoxesAndPolytopes) {
  const auto sq = box2(1, 1);
  EXPECT_EQ(sq.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_GT(detail::cross(sq.edge_vector(i), sq.edge_vector(i + 1)), 0.0);
  EXPECT_NEAR(volume(box2(10, 0.1)), 4.0, 1e-14);
  const auto cube = box_polytope({1, 1, 1});
  EXPECT_EQ(cube.facets().size(), 6u);
  EXPECT_NEAR(volume(cube), 8.0, 1e-12);
  EXPECT_NEAR(volume(cross_polytope(3)), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(volume(cross_polytope(4)), 16.0 / 24.0, 1e-12);
  EXPECT_EQ(dimension(box({1, 2})), 2);
  EXPECT_EQ(dimension(box({1, 2, 3})), 3);
  EXPECT_THROW((void)box2(1, 0), Error);
}

TEST(Bodies, PolytopeHullDropsInteriorPoints) {
  std::vector<VectorXd> pts;
  for (int m = 0; m < 8; ++m) pts.push_back(vx({m & 1 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 4 ? 1.0 : -1.0}));
  pts.push_back(vx({0.1, 0.2, -0.3}));
  const auto hull = PolytopeN::from_points(pts);
  EXPECT_EQ(hull.facets().size(), 6u);
  EXPECT_NEAR(volume(hull), 8.0, 1e-12);
  double area = 0;
  for (std::size_t f = 0; f < hull.facets().size(); ++f) area += hull.facet_area(f);
  EXPECT_NEAR(area, 24.0, 1e-12);
}

TEST(Bodies, PolytopeRejectsInconsistentFacets) {
  auto cube = box_polytope({1, 1, 1});
  auto facets = cube.facets();
  facets[0].offset += 0.1;
  EXPECT_THROW(PolytopeN(cube.vertices(), facets), Error);
}

TEST(Bodies, PolygonValidation) {
  EXPECT_THROW(Polygon2({{0, 0}, {1, 0}, {2, 0}}), Error);
  EXPECT_THROW(Polygon2({{0, 0}, {0, 1}, {1, 0}}), Error);  // clockwise
  const auto p = Polygon2::from_loop({{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0.5, 0}});
  EXPECT_EQ(p.size(), 4u);
  EXPECT_NEAR(volume(p), 1.0, 1e-15);
  const auto hull = convex_hull({{0, 0}, {2, 0}, {1, 1}, {1, 0.2}, {0, 2}, {2, 2}});
  EXPECT_EQ(hull.size(), 4u);
}

TEST(Bodies, HalfspaceCuts) {
  const auto sq = box2(1, 1);
  EXPECT_NEAR(volume(halfspace_cut(sq, Vector2d(0, 1), 0.0)), 2.0, 1e-15);
  const auto same = halfspace_cut(sq, Vector2d(0, 1), 1.0);
  ASSERT_EQ(same.size(), sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) EXPECT_EQ(same.vertex(i), sq.vertex(i));
  try {
    (void)halfspace_cut(sq, Vector2d(1, 0), -1.5);
    FAIL() << "expected EmptyCut";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::empty_cut);
  }
  const Vector2d d = Vector2d(1, 1).normalized();
  EXPECT_NEAR(volume(halfspace_cut(sq, d, std::sqrt(2.0) - 0.5)), 4.0 - 0.25, 1e-14);
}

TEST(Bodies, CurveToPolygonConverges) {
  const auto disk = curve_to_polygon(from_fourier(AngleGrid(1024), 1.0, {}));
  EXPECT_EQ(disk.size(), 1024u);
  EXPECT_NEAR(volume(disk), pi, 1e-4);
  auto gap = [](int n) {
    const auto c = from_fourier(AngleGrid(n), 1.0, {{0, 0}, {0.1, 0.05}});
    return std::abs(volume(curve_to_polygon(c)) - volume(c));
  };
  EXPECT_GT(std::log2(gap(128) / gap(256)), 1.9);
}

TEST(Bodies, EllipseConstructor) {
  const auto e = ellipse(2.0, 0.5, 0.0, Vector2d::Zero(), AngleGrid(512));
  EXPECT_NEAR(volume(e), pi, 1e-6);
  EXPECT_NEAR(e.support()[0], 2.0, 1e-15);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

TEST(Quadrature, AdaptiveSimpson) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0), std::exp(1.0) - 1, 1e-12);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0), 2.0 / 3.0, 1e-9);
  QuadratureOptions tight{1e-14, 3};
  try {
    (void)adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight);
    FAIL() << "expected QuadratureNotConverged";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::quadrature_not_converged);
  }
}

TEST(Quadrature, SimplexIntegral) {
  // ∫ x² over the unit right triangle = 1/12
  const std::vector<VectorXd> tri = {vx({0, 0}), vx({1, 0}), vx({0, 1})};
  EXPECT_NEAR(simplex_integral([](const VectorXd& x) { return x[0] * x[0]; }, tri), 1.0 / 12.0, 1e-14);
  // ∫ exp(x+y) over the same triangle is ∫_0^1 s e^s ds = 1; symmetric about the first bisection
  EXPECT_NEAR(simplex_integral([](const VectorXd& x) { return std::exp(x[0] + x[1]); }, tri), 1.0, 1e-10);
  // a triangle embedded in R³ with area sqrt(3)/2
  const std::vector<VectorXd> tri3 = {vx({1, 0, 0}), vx({0, 1, 0}), vx({0, 0, 1})};
  EXPECT_NEAR(simplex_integral([](const VectorXd&) { return 1.0; }, tri3), std::sqrt(3.0) / 2, 1e-14);
}
