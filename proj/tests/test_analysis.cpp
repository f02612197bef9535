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

const FinslerNorm2& euclid() {
  static const auto n = FinslerNorm2::euclidean();
  return n;
}
const FinslerNorm2& ell12() {
  static const auto n = FinslerNorm2::elliptic_axes({1.0, 2.0});
  return n;
}

SupportCurve2 fourier(std::vector<std::array<double, 2>> c, int n = 1024) { return from_fourier(AngleGrid(n), 1.0, std::move(c)); }

// 5-point Gauss-Legendre on [a, b]; exact for polynomials up to degree 9
template <class Fn>
double gauss5(Fn&& f, double a, double b) {
  static const double x[] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640, -0.9061798459386640};
  static const double w[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                             0.2369268850561891};
  double acc = 0;
  for (int i = 0; i < 5; ++i) acc += w[i] * f(0.5 * (a + b) + 0.5 * (b - a) * x[i]);
  return 0.5 * (b - a) * acc;
}

// ∮ (F°)² F(ν) over R_ε for F(x,y) = sqrt(x²/a² + y²/b²), edge by edge
double rect_momentum_oracle(double a, double b, double eps) {
  auto g2 = [&](double x, double y) { return a * a * x * x + b * b * y * y; };
  const double vertical = gauss5([&](double y) { return g2(1 / eps, y); }, -eps, eps) / a;
  const double horizontal = gauss5([&](double x) { return g2(x, eps); }, -1 / eps, 1 / eps) / b;
  return 2 * vertical + 2 * horizontal;
}

}  // namespace

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

TEST(Functionals, Volumes) {
  EXPECT_NEAR(volume(box2(1, 1)), 4.0, 1e-15);
  EXPECT_NEAR(volume(wulff(ell12(), 1.0)), pi / 2, 1e-9);
  for (double e : {0.2, 0.1, 0.01}) EXPECT_NEAR(volume(box2(1 / e, e)), 4.0, 1e-12);
}

TEST(Functionals, Perimeters) {
  EXPECT_NEAR(perimeter_f(fourier({}), euclid()), 2 * pi, 1e-12);
  EXPECT_NEAR(perimeter_f(box2(1, 1), ell12()), 6.0, 1e-14);
  EXPECT_NEAR(perimeter_f(wulff(ell12(), 1.0), ell12()), pi, 1e-9);
}

TEST(Functionals, Momentum) {
  for (double p : {1.5, 2.0, 3.0})
    for (double r : {0.5, 2.0}) {
      const auto w = wulff(ell12(), r);
      EXPECT_NEAR(momentum_f(w, ell12(), p), std::pow(r, p) * perimeter_f(w, ell12()), 1e-8 * std::pow(r, p));
    }
  EXPECT_NEAR(momentum_f(fourier({}), euclid(), 2), 2 * pi, 1e-12);
  EXPECT_NEAR(momentum_f(box2(1, 1), euclid(), 2), 32.0 / 3.0, 1e-12);
  EXPECT_THROW((void)momentum_f(box2(1, 1), euclid(), 1.0), Error);
}

TEST(Functionals, ThinRectangleMomentumMatchesEdgewiseOracle) {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{2.0, 0.5}})
    for (double e : {0.2, 0.1, 0.05}) {
      const auto norm = FinslerNorm2::elliptic_axes({a, b});
      const double oracle = rect_momentum_oracle(a, b, e);
      EXPECT_NEAR(momentum_f(box2(1 / e, e), norm, 2.0), oracle, 1e-10 * oracle);
    }
  // frozen value at ε = 0.1, a = b = 1
  EXPECT_NEAR(momentum_f(box2(10, 0.1), euclid(), 2.0), 1373.7346666666667, 1e-9);
}

TEST(Functionals, PolytopeMomentum) {
  const auto cube = box_polytope({1, 1, 1});
  const auto e3 = FinslerNormX::euclidean(3);
  EXPECT_NEAR(perimeter_f(cube, e3), 24.0, 1e-12);
  EXPECT_NEAR(momentum_f(cube, e3, 2.0), 40.0, 1e-9);
  // p = 3: each face contributes ∫∫ (1 + y² + z²)^{3/2} over [-1, 1]²
  auto panels = [](auto&& fn) {
    double acc = 0;
    for (int i = 0; i < 8; ++i) acc += gauss5(fn, -1 + 0.25 * i, -0.75 + 0.25 * i);
    return acc;
  };
  const double face = panels([&](double y) { return panels([&](double z) { return std::pow(1 + y * y + z * z, 1.5); }); });
  EXPECT_NEAR(momentum_f(cube, e3, 3.0), 6 * face, 1e-8 * 6 * face);
}

TEST(Functionals, CircumradiusAndMaximizer) {
  const auto w = wulff(ell12(), 1.3);
  EXPECT_NEAR(r_max(w, ell12()).value, 1.3, 1e-9);
  for (double e : {0.2, 0.1}) {
    const auto r = r_max(box2(1 / e, e), ell12());
    EXPECT_NEAR(r.value, std::sqrt(1 / (e * e) + 4 * e * e), 1e-12);
  }
  const auto sq = r_max(box2(1, 1), euclid());
  EXPECT_NEAR(sq.value, std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(sq.point == Vector2d(-1, -1));  // lexicographically smallest corner
}

TEST(Functionals, WulffReportsAreExtremal) {
  for (const auto* n : {&euclid(), &ell12()})
    for (double p : {1.5, 2.0, 3.0}) {
      const auto rep = functional_value(wulff(*n, 1.0, Vector2d::Zero(), AngleGrid(2048)), *n, p);
      EXPECT_NEAR(rep.E_F, 0.0, 1e-10);
      EXPECT_NEAR(rep.F_quotient, std::pow(n->unit_wulff_volume(), -p / 2), 1e-8);
      EXPECT_NEAR(*rep.hk, 2 * rep.V, 1e-8 * rep.V);
    }
}

TEST(Functionals, SquareReport) {
  const auto rep = functional_value(box2(1, 1), euclid(), 2.0);
  EXPECT_NEAR(rep.E_F, std::sqrt(2.0) - 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(rep.F_quotient, 1.0 / 3.0, 1e-12);
  EXPECT_FALSE(rep.hk.has_value());
  EXPECT_NEAR(rep.margin(), 1.0 / 3.0 - 1 / pi, 1e-12);
  EXPECT_LT(functional_value(box2(10, 0.1), euclid(), 2.0).E_F, 0.0);
}

TEST(Functionals, ReportFieldsAreConsistent) {
  const auto rep = functional_value(fourier({{0.05, 0.02}, {0.1, -0.03}, {0.01, 0.02}}), ell12(), 2.5);
  EXPECT_NEAR(rep.E_F, std::pow(rep.r_max, 1.5) - rep.M_F / (2 * rep.V), 1e-13);
  EXPECT_NEAR(rep.F_quotient, rep.M_F / (rep.P_F * std::pow(rep.V, 1.25)), 1e-13);
  EXPECT_THROW((void)functional_value(box2(1, 1), euclid(), 0.5), Error);
}

TEST(Functionals, ExtremeAspectRatiosStayFinite) {
  const auto rep = functional_value(box2(1e3, 1e-3), euclid(), 3.0);
  EXPECT_TRUE(std::isfinite(rep.F_quotient));
  EXPECT_GT(rep.F_quotient, 0.0);
}

TEST(Functionals, AnisotropicCurvature) {
  for (double r : {0.5, 2.0}) {
    const auto hf = anisotropic_curvature(wulff(ell12(), r, Vector2d(0.2, -0.1)), ell12());
    for (double v : hf) EXPECT_NEAR(v, 1 / r, 1e-8 / r);
  }
  for (double v : anisotropic_curvature(fourier({}), euclid())) EXPECT_NEAR(v, 1.0, 1e-10);
  const auto e = ellipse(2.0, 0.7);
  const auto hf = anisotropic_curvature(e, euclid());
  for (int j = 0; j < e.size(); ++j) EXPECT_NEAR(hf[j], e.curvature(j), 1e-9);
}

TEST(Functionals, CurvatureMatchesTangentialDivergenceOracle) {
  // H_F as the arclength derivative of the Cahn–Hoffman field ∇F(ν), projected on the tangent
  const auto c = fourier({{0.05, 0.0}, {0.08, 0.03}, {0.0, 0.02}});
  for (const auto* n : {&euclid(), &ell12()}) {
    const auto hf = anisotropic_curvature(c, *n);
    double worst = 0;
    const double d = 1e-4;
    for (int j = 0; j < c.size(); j += 8) {
      const double th = c.grid().theta(j);
      const Vector2d dx = c.point_at(th + d) - c.point_at(th - d);
      const Vector2d dn = n->grad(unit_at(th + d)) - n->grad(unit_at(th - d));
      const double oracle = dn.dot(dx) / dx.squaredNorm();
      worst = std::max(worst, std::abs(hf[j] - oracle) / oracle);
    }
    EXPECT_LE(worst, 1e-4);
  }
}

TEST(Functionals, HeintzeKarcher) {
  const auto w = wulff(ell12(), 1.5);
  EXPECT_NEAR(heintze_karcher(w, ell12()), 2 * volume(w), 1e-8);
  EXPECT_NEAR(heintze_karcher(fourier({}), euclid()), 2 * pi, 1e-12);
  const auto c = fourier({{0, 0}, {0.1, 0}});
  EXPECT_GT(heintze_karcher(c, euclid()), 2 * volume(c) + 1e-4);
}

TEST(Functionals, ScaleInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 10);
  const auto c = fourier({{0.1, 0.05}, {0.05, -0.02}, {0.01, 0.01}});
  const double base = functional_value(c, ell12(), 2.0, false).F_quotient;
  for (int k = 0; k < 10; ++k)
    EXPECT_NEAR(functional_value(c.scaled(u(rng)), ell12(), 2.0, false).F_quotient, base, 1e-9 * base);
}

TEST(Functionals, Inequalities) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 25; ++k) {
    std::vector<std::array<double, 2>> c;
    for (int m = 1; m <= 5; ++m) c.push_back({0.2 * u(rng) / (m * m), 0.2 * u(rng) / (m * m)});
    const auto curve = fourier(c, 512);
    for (const auto* n : {&euclid(), &ell12()}) {
      const double kappa = n->unit_wulff_volume();
      const auto rep = functional_value(curve, *n, 2.0);
      EXPECT_GE(rep.F_quotient, 1 / kappa - 1e-8);
      EXPECT_LE(rep.M_F / rep.P_F, std::pow(rep.r_max, 2) * (1 + 1e-10));
      EXPECT_GE(rep.P_F, 2 * std::sqrt(kappa * rep.V) * (1 - 1e-9));
      EXPECT_GE(*rep.hk, 2 * rep.V * (1 - 1e-9));
      // nV = ∮⟨x, ν⟩ ≤ ∮ F°(x) F(ν)
      const double nv = boundary_integral(curve, [](const Vector2d& x, const Vector2d& nu) { return x.dot(nu); });
      EXPECT_NEAR(nv, 2 * rep.V, 1e-10);
      const double m1 = momentum_f(curve, *n, 1.0 + 1e-12);
      EXPECT_LE(nv, m1 * (1 + 1e-9));
    }
    // Betta: (∮|x|^p)^n ≥ n^n ω_n^{1−p} V^{n+p−1}
    const double p = 3.0;
    const double lhs = boundary_integral(curve, [&](const Vector2d& x, const Vector2d&) { return std::pow(x.norm(), p); });
    EXPECT_GE(lhs * lhs, 4 * std::pow(pi, 1 - p) * std::pow(volume(curve), 1 + p) * (1 - 1e-9));
  }
}

TEST(Functionals, CurveAndPolygonAgree) {
  auto gap = [](int n) {
    const auto c = from_fourier(AngleGrid(n), 1.0, {{0.05, 0.0}, {0.1, 0.03}});
    const double a = functional_value(c, ell12(), 2.0, false).F_quotient;
    const double b = functional_value(curve_to_polygon(c), ell12(), 2.0).F_quotient;
    return std::abs(a - b);
  };
  const double g1 = gap(128), g2 = gap(256);
  EXPECT_LT(g2, 1e-4);
  EXPECT_GT(std::log2(g1 / g2), 1.9);
}

// ---------------------------------------------------------------------------
// Variations
// ---------------------------------------------------------------------------

TEST(Variation, PerturbExamples) {
  const AngleGrid g(512);
  const auto w = wulff(ell12(), 1.0, Vector2d::Zero(), g);
  const auto grown = perturb(w, ell12(), PerturbationField::constant(g, 1.0), 0.3);
  const auto exact = wulff(ell12(), 1.3, Vector2d::Zero(), g);
  for (int j = 0; j < g.size(); ++j) EXPECT_NEAR(grown.support()[j], exact.support()[j], 1e-15);
  const auto same = perturb(w, ell12(), PerturbationField::constant(g, 0.0), 0.3);
  for (int j = 0; j < g.size(); ++j) EXPECT_EQ(same.support()[j], w.support()[j]);
  const auto disk = from_fourier(g, 1.0, {});
  const auto field = PerturbationField::from(g, [](double t) { return std::cos(2 * t); }, "cos2");
  const auto oval = perturb(disk, euclid(), field, 0.05);
  EXPECT_NEAR(oval.min_radius_of_curvature(), 0.85, 1e-6);
  EXPECT_THROW((void)perturb(disk, euclid(), field, 0.5), Error);
}

TEST(Variation, WulffGrowthDerivatives) {
  const AngleGrid g(1024);
  const auto one = PerturbationField::constant(g, 1.0);
  const auto disk = from_fourier(g, 1.0, {});
  EXPECT_NEAR(dV_predicted(disk, euclid(), one), 2 * pi, 1e-12);
  EXPECT_NEAR(dP_predicted(disk, euclid(), one), 2 * pi, 1e-12);
  EXPECT_NEAR(dM_predicted(disk, euclid(), 2.0, one), 6 * pi, 1e-12);
  for (double r : {0.5, 2.0}) {
    const auto w = wulff(ell12(), r, Vector2d::Zero(), g);
    const double k = ell12().unit_wulff_volume();
    EXPECT_NEAR(dV_predicted(w, ell12(), one), 2 * k * r, 1e-8);
    EXPECT_NEAR(dP_predicted(w, ell12(), one), 2 * k, 1e-8);
    for (double p : {1.5, 3.0}) EXPECT_NEAR(dM_predicted(w, ell12(), p, one), (p + 1) * 2 * k * std::pow(r, p), 1e-7);
  }
}

TEST(Variation, NullFieldsAndTranslations) {
  const AngleGrid g(512);
  const auto c = from_fourier(g, 1.0, {{0.05, 0.02}, {0.1, 0}});
  const auto zero = PerturbationField::constant(g, 0.0);
  EXPECT_EQ(dV_predicted(c, ell12(), zero), 0.0);
  EXPECT_EQ(dP_predicted(c, ell12(), zero), 0.0);
  EXPECT_EQ(dM_predicted(c, ell12(), 2.0, zero), 0.0);
  const auto disk = from_fourier(g, 1.0, {});
  const auto shift = PerturbationField::from(g, [](double t) { return std::cos(t); }, "cos");
  EXPECT_NEAR(dV_predicted(disk, euclid(), shift), 0.0, 1e-14);
  EXPECT_NEAR(dP_predicted(disk, euclid(), shift), 0.0, 1e-14);
}

TEST(Variation, OriginOutsideIsReported) {
  const auto c = wulff(euclid(), 1.0, Vector2d(1.5, 0), AngleGrid(256));
  try {
    (void)dM_predicted(c, euclid(), 2.0, PerturbationField::constant(c.grid(), 1.0));
    FAIL() << "expected OriginOutside";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::origin_outside);
  }
}

TEST(Variation, FiniteDifferencesConfirmFormulas) {
  const auto c = fourier({{0.05, 0.0}, {0.08, 0.03}, {0.0, 0.02}});
  const auto field = PerturbationField::from(
      c.grid(), [](double t) { return 0.7 + 0.3 * std::cos(2 * t) - 0.2 * std::sin(3 * t) + 0.1 * std::cos(t); }, "mix");
  const std::vector<double> ts = {1e-2, 5e-3, 2.5e-3};
  for (const auto* n : {&euclid(), &ell12()})
    for (double p : {1.5, 2.0, 3.0}) {
      for (auto target : {VariationTarget::momentum, VariationTarget::quotient}) {
        const auto rows = validate_derivative(target, c, *n, p, field, ts);
        EXPECT_GE(rows.back().order, 1.9) << to_string(target);
        EXPECT_LE(rows.back().rel_error, 5e-5) << to_string(target);
      }
      // volume is quadratic and the perimeter linear in t, so central differences are exact
      for (auto target : {VariationTarget::volume, VariationTarget::perimeter})
        for (const auto& r : validate_derivative(target, c, *n, p, field, ts)) EXPECT_LE(r.rel_error, 1e-10);
    }
}

TEST(Variation, MomentumOnDiskMatchesFiniteDifference) {
  const auto disk = fourier({});
  const auto field = PerturbationField::from(disk.grid(), [](double t) { return std::cos(2 * t); }, "cos2");
  const auto rows = validate_derivative(VariationTarget::momentum, disk, euclid(), 2.0, field, {1e-2, 5e-3, 2.5e-3}, 1.0);
  EXPECT_LE(rows.back().rel_error, 1e-5);
}

TEST(Variation, GradientReproducesDirectionalDerivative) {
  const auto c = fourier({{0.02, 0.0}, {0.08, 0.03}, {0.0, 0.02}});
  const auto field = PerturbationField::from(c.grid(), [](double t) { return 1 + 0.5 * std::sin(2 * t); }, "f");
  const auto grad = quotient_gradient(c, ell12(), 2.0);
  double acc = 0;
  for (int j = 0; j < c.size(); ++j) acc += grad[j] * field.phi[j] * ell12()(c.grid().unit(j));
  acc *= c.grid().step();
  EXPECT_NEAR(acc, dF_quotient(c, ell12(), 2.0, field), 1e-12);
}

TEST(Variation, FlowDerivativeOfQuotient) {
  const AngleGrid g(512);
  for (double p : {1.5, 2.0, 3.0}) EXPECT_NEAR(dF_quotient_iamcf(wulff(ell12(), 1.0, Vector2d::Zero(), g), ell12(), p), 0.0, 1e-8);
  const auto c = from_fourier(g, 1.0, {{0.05, 0.0}, {0.08, 0.03}, {0.0, 0.02}});
  for (const auto* n : {&euclid(), &ell12()}) {
    const double predicted = dF_quotient_iamcf(c, *n, 2.0);
    const double fd = flow_quotient_derivative_fd(c, *n, 2.0, 1e-4);
    EXPECT_NEAR(fd, predicted, 1e-4 * std::abs(predicted));
  }
}

TEST(Variation, NegativeExcessGivesDescent) {
  // elongated smooth bodies have E_F < 0
  for (double aspect : {6.0, 9.0}) {
    const auto e = ellipse(aspect, 1.0 / aspect, 0.3);
    for (const auto* n : {&euclid(), &ell12()}) {
      const auto rep = functional_value(e, *n, 2.0, false);
      ASSERT_LT(rep.E_F, 0.0);
      EXPECT_LT(dF_quotient_iamcf(e, *n, 2.0), 0.0);
    }
  }
}

TEST(Variation, IntegralIdentities) {
  const auto c = fourier({{0.05, 0.0}, {0.08, 0.03}, {0.0, 0.02}});
  for (const auto* n : {&euclid(), &ell12()})
    for (double p : {1.5, 2.0, 3.0}) {
      const double m = momentum_f(c, *n, p);
      EXPECT_LE(std::abs(zero_integral_residual(c, *n, p)), 1e-9 * m);
      EXPECT_LE(sec_ineq_integral(c, *n, p), 1e-9 * m / volume(c));
    }
  EXPECT_LE(sec_ineq_integral(box2(2, 1), ell12(), 2.0), 0.0);
}

TEST(Variation, SquareCornerCut) {
  const auto rows = cut_experiment(box2(1, 1), euclid(), 2.0, {0.5});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].dV, -0.25, 1e-14);
  EXPECT_LT(rows[0].dP, 0.0);
  EXPECT_NEAR(rows[0].dP, 1.0 - std::sqrt(2.0), 1e-14);
  EXPECT_LE((rows[0].direction - Vector2d(-1, -1).normalized()).norm(), 1e-15);
}

TEST(Variation, CutLemmasAlongHalving) {
  const auto poly = convex_hull({{1.2, 0.1}, {0.4, 0.9}, {-0.8, 0.7}, {-1.0, -0.3}, {-0.2, -1.1}, {0.9, -0.6}});
  for (const auto* n : {&euclid(), &ell12()}) {
    const auto rows = cut_experiment(poly, *n, 2.0, halving_sequence(0.1, 10));
    double bound = 0;
    for (const auto& r : rows) {
      EXPECT_LE(r.dV, 0.0);
      EXPECT_LE(r.dP, 0.0);
      bound = std::max(bound, r.volume_perimeter_ratio());
    }
    EXPECT_LT(bound, 10.0);
    // the normalized slack and |ΔV|/|ΔP_F| are O(ε)
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_NEAR(rows[i].bound_ratio() / rows[i - 1].bound_ratio(), 0.5, 0.05);
      EXPECT_NEAR(rows[i].volume_perimeter_ratio() / rows[i - 1].volume_perimeter_ratio(), 0.5, 0.05);
    }
    EXPECT_LT(rows.back().bound_ratio(), 1e-3);
  }
}

TEST(Variation, CutsCannotImproveWulff) {
  const auto poly = curve_to_polygon(wulff(ell12(), 1.0, Vector2d::Zero(), AngleGrid(512)));
  for (const auto& r : cut_experiment(poly, ell12(), 2.0, halving_sequence(0.05, 6))) EXPECT_GE(r.dF, -1e-3 * r.eps);
}
