#pragma once

// V, P_F, M_F, r_max, the excess and the scale-invariant quotient
//   𝓕(Ω) = M_F(Ω) / (P_F(Ω) V(Ω)^{p/n}).

#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/angle_grid.hpp"
#include "wulff_lab/bodies.hpp"
#include "wulff_lab/error.hpp"
#include "wulff_lab/finsler.hpp"
#include "wulff_lab/quadrature.hpp"

namespace wulff_lab {

/// Per-node quantities of a support curve under a norm.
/// f = F(u), f_rho = f + f'', rho = h + h'', g = F°(x).
struct CurveSamples {
  double step = 0.0;
  std::vector<double> h, rho, f, f_rho, g;
  std::vector<Eigen::Vector2d> x;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(h.size()); }
};

inline CurveSamples sample(const SupportCurve2& curve, const FinslerNorm2& norm) {
  const auto& grid = curve.grid();
  const int n = grid.size();
  CurveSamples s;
  s.step = grid.step();
  s.h.assign(curve.support().begin(), curve.support().end());
  s.rho.assign(curve.radius_of_curvature().begin(), curve.radius_of_curvature().end());
  s.f.resize(static_cast<std::size_t>(n));
  s.g.resize(static_cast<std::size_t>(n));
  s.x.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    s.f[j] = norm(grid.unit(j));
    s.x[j] = curve.point(j);
    s.g[j] = norm.polar(s.x[j]);
  }
  s.f_rho = periodic_plus_d2(s.f, s.step);
  return s;
}

// ---------------------------------------------------------------------------
// Boundary integrals ∮ fn(x, ν) dH^{n-1}
// ---------------------------------------------------------------------------

template <class Fn>
double boundary_integral(const SupportCurve2& curve, Fn&& fn) {
  double acc = 0.0;
  for (int j = 0; j < curve.size(); ++j) acc += fn(curve.point(j), curve.normal(j)) * curve.radius_of_curvature()[j];
  return acc * curve.grid().step();
}

/// fn is integrated along every edge with the edge normal held fixed.
template <class Fn>
double boundary_integral(const Polygon2& poly, Fn&& fn, const QuadratureOptions& opt = {}) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Eigen::Vector2d a = poly.vertex(i);
    const Eigen::Vector2d e = poly.edge_vector(i);
    const Eigen::Vector2d nu = poly.outward_normal(i);
    const double len = e.norm();
    acc += len * adaptive_simpson([&](double s) { return fn(Eigen::Vector2d(a + s * e), nu); }, 0.0, 1.0, opt);
  }
  return acc;
}

template <class Fn>
double boundary_integral(const PolytopeN& poly, Fn&& fn, const QuadratureOptions& opt = {}) {
  double acc = 0.0;
  for (const auto& simplex : poly.boundary_simplices()) {
    const Eigen::VectorXd& nu = poly.facets()[static_cast<std::size_t>(simplex.facet)].normal;
    acc += simplex_integral([&](const Eigen::VectorXd& x) { return fn(x, nu); }, simplex.points, opt);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Volume and anisotropic perimeter
// ---------------------------------------------------------------------------

/// ½ Σ h (h + h'') Δθ: equal to ½∮(h² − h'²) after summation by parts.
inline double volume(const SupportCurve2& curve) {
  double acc = 0.0;
  const auto h = curve.support();
  const auto rho = curve.radius_of_curvature();
  for (int j = 0; j < curve.size(); ++j) acc += h[j] * rho[j];
  return 0.5 * acc * curve.grid().step();
}

inline double volume(const Polygon2& poly) {
  double area2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) area2 += detail::cross(poly.vertex(i), poly.vertex(i + 1));
  return 0.5 * area2;
}

inline double volume(const PolytopeN& poly) {
  double acc = 0.0;
  for (std::size_t f = 0; f < poly.facets().size(); ++f) acc += poly.facets()[f].offset * poly.facet_area(f);
  return acc / poly.dim();
}

inline double perimeter_f(const SupportCurve2& curve, const FinslerNorm2& norm) {
  double acc = 0.0;
  for (int j = 0; j < curve.size(); ++j) acc += norm(curve.grid().unit(j)) * curve.radius_of_curvature()[j];
  return acc * curve.grid().step();
}

inline double perimeter_f(const Polygon2& poly, const FinslerNorm2& norm) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) acc += norm(poly.outward_normal(i)) * poly.edge_vector(i).norm();
  return acc;
}

inline double perimeter_f(const PolytopeN& poly, const FinslerNormX& norm) {
  double acc = 0.0;
  for (std::size_t f = 0; f < poly.facets().size(); ++f) acc += norm(poly.facets()[f].normal) * poly.facet_area(f);
  return acc;
}

// ---------------------------------------------------------------------------
// Momentum M_F = ∮ (F°(x))^p F(ν)
// ---------------------------------------------------------------------------

inline void check_exponent(double p) { require(std::isfinite(p) && p > 1.0, "p must exceed 1"); }

inline double momentum_f(const SupportCurve2& curve, const FinslerNorm2& norm, double p) {
  check_exponent(p);
  return boundary_integral(curve, [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nu) {
    return std::pow(norm.polar(x), p) * norm(nu);
  });
}

inline double momentum_f(const Polygon2& poly, const FinslerNorm2& norm, double p, const QuadratureOptions& opt = {}) {
  check_exponent(p);
  return boundary_integral(
      poly, [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nu) { return std::pow(norm.polar(x), p) * norm(nu); },
      opt);
}

inline double momentum_f(const PolytopeN& poly, const FinslerNormX& norm, double p, const QuadratureOptions& opt = {}) {
  check_exponent(p);
  return boundary_integral(
      poly, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& nu) { return std::pow(norm.polar(x), p) * norm(nu); },
      opt);
}

// ---------------------------------------------------------------------------
// r_max = max F° over the body, attained on the boundary
// ---------------------------------------------------------------------------

template <class Vec>
struct RadiusResult {
  double value;
  Vec point;
};

namespace detail {

template <class Vec>
bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Maximum over a finite point set; near-ties go to the lexicographically
// smallest point so that repeated runs pick the same corner.
template <class Vec, class Norm>
RadiusResult<Vec> max_polar_over(const std::vector<Vec>& pts, const Norm& norm) {
  double best = 0.0;
  for (const auto& v : pts) best = std::max(best, norm.polar(v));
  const double cutoff = best * (1.0 - 1e-12);
  const Vec* arg = nullptr;
  for (const auto& v : pts)
    if (norm.polar(v) >= cutoff && (arg == nullptr || lex_less(v, *arg))) arg = &v;
  return {best, *arg};
}

}  // namespace detail

inline RadiusResult<Eigen::Vector2d> r_max(const Polygon2& poly, const FinslerNorm2& norm) {
  return detail::max_polar_over(poly.vertices(), norm);
}

inline RadiusResult<Eigen::VectorXd> r_max(const PolytopeN& poly, const FinslerNormX& norm) {
  return detail::max_polar_over(poly.vertices(), norm);
}

inline RadiusResult<Eigen::Vector2d> r_max(const SupportCurve2& curve, const FinslerNorm2& norm) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(curve.size()));
  for (int j = 0; j < curve.size(); ++j) pts.push_back(curve.point(j));
  double best = -1.0;
  int arg = 0;
  for (int j = 0; j < curve.size(); ++j) {
    double v = norm.polar(pts[j]);
    if (v > best) best = v, arg = j;
  }
  const double step = curve.grid().step();
  auto at = [&](double t) { return norm.polar(curve.point_at(t)); };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (arg - 1) * step, hi = (arg + 1) * step;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = at(x1), f2 = at(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + gr * (hi - lo), f2 = at(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - gr * (hi - lo), f1 = at(x1);
    }
  }
  double t = 0.5 * (lo + hi);
  double refined = at(t);
  if (refined > best) return {refined, curve.point_at(t)};
  return {best, pts[static_cast<std::size_t>(arg)]};
}

// ---------------------------------------------------------------------------
// Anisotropic curvature and the Heintze–Karcher integral (smooth curves only)
// ---------------------------------------------------------------------------

/// H_F = (f + f'') / (h + h'') at every node.
inline std::vector<double> anisotropic_curvature(const SupportCurve2& curve, const FinslerNorm2& norm) {
  std::vector<double> f(static_cast<std::size_t>(curve.size()));
  for (int j = 0; j < curve.size(); ++j) f[j] = norm(curve.grid().unit(j));
  auto hf = periodic_plus_d2(f, curve.grid().step());
  for (int j = 0; j < curve.size(); ++j) {
    hf[j] /= curve.radius_of_curvature()[j];
    if (!(hf[j] > 0.0))
      throw Error(ErrorKind::not_convex, "anisotropic curvature is not positive at node " + std::to_string(j));
  }
  return hf;
}

/// ∮ F(ν)/H_F dH¹.
inline double heintze_karcher(const SupportCurve2& curve, const FinslerNorm2& norm) {
  auto hf = anisotropic_curvature(curve, norm);
  double acc = 0.0;
  for (int j = 0; j < curve.size(); ++j) acc += norm(curve.grid().unit(j)) / hf[j] * curve.radius_of_curvature()[j];
  return acc * curve.grid().step();
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct FunctionalReport {
  double p = 2.0;
  int n = 2;
  double V = 0.0;
  double P_F = 0.0;
  double M_F = 0.0;
  double r_max = 0.0;
  Eigen::VectorXd x_max;
  double E_F = 0.0;
  double F_quotient = 0.0;
  std::optional<double> hk;
  double kappa_n = 0.0;

  /// 𝓕 − κ_n^{−p/n}; the Main Theorem says this is nonnegative.
  [[nodiscard]] double margin() const { return F_quotient - lower_bound(); }
  [[nodiscard]] double lower_bound() const { return std::pow(kappa_n, -p / n); }
};

/// M / (P V^{p/n}) assembled in log space.
inline double quotient(double m, double per, double vol, double p, int n) {
  return std::exp(std::log(m) - std::log(per) - (p / n) * std::log(vol));
}

inline double excess_from(double r, double m, double vol, double p, int n) {
  return std::pow(r, p - 1.0) - m / (n * vol);
}

namespace detail {

template <class Norm>
FunctionalReport assemble(double p, int n, double vol, double per, double mom, double r, Eigen::VectorXd x,
                          const Norm& norm) {
  FunctionalReport rep;
  rep.p = p;
  rep.n = n;
  rep.V = vol;
  rep.P_F = per;
  rep.M_F = mom;
  rep.r_max = r;
  rep.x_max = std::move(x);
  rep.E_F = excess_from(r, mom, vol, p, n);
  rep.F_quotient = quotient(mom, per, vol, p, n);
  rep.kappa_n = norm.unit_wulff_volume();
  return rep;
}

}  // namespace detail

inline FunctionalReport functional_value(const SupportCurve2& curve, const FinslerNorm2& norm, double p,
                                         bool with_hk = true) {
  check_exponent(p);
  auto r = r_max(curve, norm);
  auto rep = detail::assemble(p, 2, volume(curve), perimeter_f(curve, norm), momentum_f(curve, norm, p), r.value,
                              Eigen::VectorXd(r.point), norm);
  if (with_hk) rep.hk = heintze_karcher(curve, norm);
  return rep;
}

inline FunctionalReport functional_value(const Polygon2& poly, const FinslerNorm2& norm, double p) {
  check_exponent(p);
  auto r = r_max(poly, norm);
  return detail::assemble(p, 2, volume(poly), perimeter_f(poly, norm), momentum_f(poly, norm, p), r.value,
                          Eigen::VectorXd(r.point), norm);
}

inline FunctionalReport functional_value(const PolytopeN& poly, const FinslerNormX& norm, double p) {
  check_exponent(p);
  require(norm.dim() == poly.dim(), "norm and polytope dimensions differ");
  auto r = r_max(poly, norm);
  return detail::assemble(p, poly.dim(), volume(poly), perimeter_f(poly, norm), momentum_f(poly, norm, p), r.value,
                          r.point, norm);
}

/// Dispatch over the body variant; the norm is instantiated in the body's dimension.
inline FunctionalReport functional_value(const ConvexBody& body, const NormSpec& spec, double p) {
  return std::visit(
      [&](const auto& b) -> FunctionalReport {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, PolytopeN>) return functional_value(b, FinslerNormX::from_spec(spec, b.dim()), p);
        else return functional_value(b, FinslerNorm2::from_spec(spec), p);
      },
      body);
}

template <class Body, class Norm>
double excess(const Body& body, const Norm& norm, double p) {
  auto r = r_max(body, norm);
  const int n = [&] {
    if constexpr (std::is_same_v<Body, PolytopeN>) return body.dim();
    else return 2;
  }();
  return excess_from(r.value, momentum_f(body, norm, p), volume(body), p, n);
}

}  // namespace wulff_lab
