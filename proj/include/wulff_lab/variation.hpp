#pragma once

// First variations of V, P_F, M_F and 𝓕 along normal perturbations of a
// support curve, and the halfspace-cut experiments on polygons.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/bodies.hpp"
#include "wulff_lab/functionals.hpp"

namespace wulff_lab {

/// Speed φ along the Cahn–Hoffman field ∇F(ν) at every grid node.
struct PerturbationField {
  std::vector<double> phi;
  std::string tag;

  static PerturbationField constant(const AngleGrid& grid, double value) {
    return {std::vector<double>(static_cast<std::size_t>(grid.size()), value), "constant"};
  }

  static PerturbationField from(const AngleGrid& grid, const std::function<double(double)>& fn, std::string tag) {
    PerturbationField p{std::vector<double>(static_cast<std::size_t>(grid.size())), std::move(tag)};
    for (int j = 0; j < grid.size(); ++j) p.phi[j] = fn(grid.theta(j));
    return p;
  }

  /// φ = 1/H_F, the inverse anisotropic mean curvature speed.
  static PerturbationField iamcf(const SupportCurve2& curve, const FinslerNorm2& norm) {
    auto hf = anisotropic_curvature(curve, norm);
    for (double& v : hf) v = 1.0 / v;
    return {std::move(hf), "iamcf"};
  }
};

namespace detail {
inline void check_field(const SupportCurve2& curve, const PerturbationField& field) {
  require(static_cast<int>(field.phi.size()) == curve.size(), "perturbation field does not match the grid");
  for (double v : field.phi) require(std::isfinite(v), "perturbation field must be finite");
}
}  // namespace detail

/// h_t = h + t φ F(u): moving x by tφ∇F(ν) shifts the support by tφF(ν).
inline SupportCurve2 perturb(const SupportCurve2& curve, const FinslerNorm2& norm, const PerturbationField& field,
                             double t) {
  detail::check_field(curve, field);
  std::vector<double> h(curve.support().begin(), curve.support().end());
  for (int j = 0; j < curve.size(); ++j) h[j] += t * field.phi[j] * norm(curve.grid().unit(j));
  return SupportCurve2(curve.grid(), std::move(h));
}

inline double dV_predicted(const SupportCurve2& curve, const FinslerNorm2& norm, const PerturbationField& field) {
  detail::check_field(curve, field);
  double acc = 0.0;
  for (int j = 0; j < curve.size(); ++j)
    acc += field.phi[j] * norm(curve.grid().unit(j)) * curve.radius_of_curvature()[j];
  return acc * curve.grid().step();
}

/// ∮ H_F φ F(ν) dH¹, with H_F ρ = f + f''.
inline double dP_predicted(const SupportCurve2& curve, const FinslerNorm2& norm, const PerturbationField& field) {
  detail::check_field(curve, field);
  const auto s = sample(curve, norm);
  double acc = 0.0;
  for (int j = 0; j < s.size(); ++j) acc += field.phi[j] * s.f[j] * s.f_rho[j];
  return acc * s.step;
}

namespace detail {
inline void check_origin(const CurveSamples& s) {
  for (int j = 0; j < s.size(); ++j)
    if (!(s.g[j] > 0.0))
      throw Error(ErrorKind::origin_outside, "F°(x) vanishes at boundary node " + std::to_string(j));
  for (int j = 0; j < s.size(); ++j)
    if (s.h[j] <= 0.0) throw Error(ErrorKind::origin_outside, "origin is not interior (h <= 0 at node " + std::to_string(j) + ")");
}

// ⟨∇F°(x), ∇F(u)⟩ at every node.
inline std::vector<double> polar_dot_cahn_hoffman(const CurveSamples& s, const FinslerNorm2& norm, const AngleGrid& grid) {
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  for (int j = 0; j < s.size(); ++j) out[j] = norm.polar_grad(s.x[j]).dot(norm.grad(grid.unit(j)));
  return out;
}
}  // namespace detail

/// p∮(F°)^{p−1}⟨∇F°, φν_F⟩F(ν) + ∮(F°)^p H_F φ F(ν).
inline double dM_predicted(const SupportCurve2& curve, const FinslerNorm2& norm, double p,
                           const PerturbationField& field) {
  check_exponent(p);
  detail::check_field(curve, field);
  const auto s = sample(curve, norm);
  detail::check_origin(s);
  const auto dot = detail::polar_dot_cahn_hoffman(s, norm, curve.grid());
  double acc = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    const double w = field.phi[j] * s.f[j];
    acc += p * std::pow(s.g[j], p - 1.0) * dot[j] * w * s.rho[j] + std::pow(s.g[j], p) * s.f_rho[j] * w;
  }
  return acc * s.step;
}

/// d𝓕 = (1/(P V^{p/n})) [dM − (M/P) dP − (p/n)(M/V) dV].
inline double dF_quotient(const SupportCurve2& curve, const FinslerNorm2& norm, double p,
                          const PerturbationField& field) {
  const double vol = volume(curve), per = perimeter_f(curve, norm), mom = momentum_f(curve, norm, p);
  const double dv = dV_predicted(curve, norm, field), dp = dP_predicted(curve, norm, field);
  const double dm = dM_predicted(curve, norm, p, field);
  const double q = quotient(mom, per, vol, p, 2);
  return q * (dm / mom - dp / per - (p / 2.0) * dv / vol);
}

/// Derivative of 𝓕 along the IAMCF:
/// (p/(P V^{p/n})) ∮[(F°)^{p−1}⟨∇F°, ν_F⟩ − M/(nV)] F(ν)/H_F dH¹.
inline double dF_quotient_iamcf(const SupportCurve2& curve, const FinslerNorm2& norm, double p) {
  check_exponent(p);
  const auto s = sample(curve, norm);
  detail::check_origin(s);
  const auto dot = detail::polar_dot_cahn_hoffman(s, norm, curve.grid());
  const double vol = volume(curve), per = perimeter_f(curve, norm), mom = momentum_f(curve, norm, p);
  const double mean = mom / (2.0 * vol);
  double acc = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    if (!(s.f_rho[j] > 0.0)) throw Error(ErrorKind::not_convex, "anisotropic curvature is not positive");
    const double hf = s.f_rho[j] / s.rho[j];
    acc += (std::pow(s.g[j], p - 1.0) * dot[j] - mean) * s.f[j] / hf * s.rho[j];
  }
  return p / (per * std::exp((p / 2.0) * std::log(vol))) * acc * s.step;
}

/// L² gradient of 𝓕 with respect to the support function: d𝓕 = Σ_j G_j δh_j Δθ.
inline std::vector<double> quotient_gradient(const SupportCurve2& curve, const FinslerNorm2& norm, double p) {
  check_exponent(p);
  const auto s = sample(curve, norm);
  detail::check_origin(s);
  const auto dot = detail::polar_dot_cahn_hoffman(s, norm, curve.grid());
  const double vol = volume(curve), per = perimeter_f(curve, norm), mom = momentum_f(curve, norm, p);
  const double q = quotient(mom, per, vol, p, 2);
  std::vector<double> grad(static_cast<std::size_t>(s.size()));
  for (int j = 0; j < s.size(); ++j) {
    const double dm = p * std::pow(s.g[j], p - 1.0) * dot[j] * s.rho[j] + std::pow(s.g[j], p) * s.f_rho[j];
    grad[j] = q * (dm / mom - s.f_rho[j] / per - (p / 2.0) * s.rho[j] / vol);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Integral identities
// ---------------------------------------------------------------------------

/// ∮[(F°)^p − M/P] F(ν) dH¹; zero for every body.
inline double zero_integral_residual(const SupportCurve2& curve, const FinslerNorm2& norm, double p) {
  const auto s = sample(curve, norm);
  const double ratio = momentum_f(curve, norm, p) / perimeter_f(curve, norm);
  double acc = 0.0;
  for (int j = 0; j < s.size(); ++j) acc += (std::pow(s.g[j], p) - ratio) * s.f[j] * s.rho[j];
  return acc * s.step;
}

/// ∮[(F°)^{p−1}⟨∇F°, ν_F⟩ − M/(nV)] F(ν) dH¹; nonpositive for every body.
inline double sec_ineq_integral(const SupportCurve2& curve, const FinslerNorm2& norm, double p) {
  const auto s = sample(curve, norm);
  detail::check_origin(s);
  const auto dot = detail::polar_dot_cahn_hoffman(s, norm, curve.grid());
  const double mean = momentum_f(curve, norm, p) / (2.0 * volume(curve));
  double acc = 0.0;
  for (int j = 0; j < s.size(); ++j) acc += (std::pow(s.g[j], p - 1.0) * dot[j] - mean) * s.f[j] * s.rho[j];
  return acc * s.step;
}

inline double sec_ineq_integral(const Polygon2& poly, const FinslerNorm2& norm, double p) {
  check_exponent(p);
  const double mean = momentum_f(poly, norm, p) / (2.0 * volume(poly));
  return boundary_integral(poly, [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nu) {
    const double g = norm.polar(x);
    if (g == 0.0) return -mean * norm(nu);
    return (std::pow(g, p - 1.0) * norm.polar_grad(x).dot(norm.grad(nu)) - mean) * norm(nu);
  });
}

// ---------------------------------------------------------------------------
// Finite-difference validation
// ---------------------------------------------------------------------------

enum class VariationTarget { volume, perimeter, momentum, quotient };

inline const char* to_string(VariationTarget t) noexcept {
  switch (t) {
    case VariationTarget::volume: return "dV";
    case VariationTarget::perimeter: return "dP";
    case VariationTarget::momentum: return "dM";
    case VariationTarget::quotient: return "dF";
  }
  return "?";
}

struct DerivativeRow {
  double t;
  double value;      // central difference (G(t) − G(−t)) / 2t
  double predicted;
  double ratio;      // value / predicted
  double rel_error;  // |value − predicted| / max(|predicted|, scale)
  double order;      // log(err_prev/err)/log(t_prev/t); NaN on the first row
};

inline double evaluate_target(VariationTarget target, const SupportCurve2& curve, const FinslerNorm2& norm, double p) {
  switch (target) {
    case VariationTarget::volume: return volume(curve);
    case VariationTarget::perimeter: return perimeter_f(curve, norm);
    case VariationTarget::momentum: return momentum_f(curve, norm, p);
    case VariationTarget::quotient:
      return quotient(momentum_f(curve, norm, p), perimeter_f(curve, norm), volume(curve), p, 2);
  }
  return 0.0;
}

inline double predicted_target(VariationTarget target, const SupportCurve2& curve, const FinslerNorm2& norm, double p,
                               const PerturbationField& field) {
  switch (target) {
    case VariationTarget::volume: return dV_predicted(curve, norm, field);
    case VariationTarget::perimeter: return dP_predicted(curve, norm, field);
    case VariationTarget::momentum: return dM_predicted(curve, norm, p, field);
    case VariationTarget::quotient: return dF_quotient(curve, norm, p, field);
  }
  return 0.0;
}

/// `scale` guards the relative error when the predicted derivative is ~0.
inline std::vector<DerivativeRow> validate_derivative(VariationTarget target, const SupportCurve2& curve,
                                                      const FinslerNorm2& norm, double p,
                                                      const PerturbationField& field, const std::vector<double>& ts,
                                                      double scale = 0.0) {
  const double predicted = predicted_target(target, curve, norm, p, field);
  const double denom = std::max(std::abs(predicted), scale);
  std::vector<DerivativeRow> rows;
  double prev_err = 0.0, prev_t = 0.0;
  for (double t : ts) {
    const double plus = evaluate_target(target, perturb(curve, norm, field, t), norm, p);
    const double minus = evaluate_target(target, perturb(curve, norm, field, -t), norm, p);
    DerivativeRow row{};
    row.t = t;
    row.value = (plus - minus) / (2.0 * t);
    row.predicted = predicted;
    row.ratio = predicted != 0.0 ? row.value / predicted : std::nan("");
    const double err = std::abs(row.value - predicted);
    row.rel_error = denom > 0.0 ? err / denom : err;
    row.order = rows.empty() || err == 0.0 || prev_err == 0.0 ? std::nan("")
                                                              : std::log(prev_err / err) / std::log(prev_t / t);
    rows.push_back(row);
    prev_err = err;
    prev_t = t;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Halfspace cuts at the F°-farthest point
// ---------------------------------------------------------------------------

struct CutReport {
  double eps = 0.0;
  double dV = 0.0;
  double dP = 0.0;
  double dM = 0.0;
  double r_max = 0.0;
  double bound_rhs = 0.0;  // p r^{p−1} ΔV + r^p ΔP_F
  double dF = 0.0;
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();

  /// (ΔM − bound_rhs) / (|ΔV| + |ΔP_F|)
  [[nodiscard]] double bound_ratio() const { return (dM - bound_rhs) / (std::abs(dV) + std::abs(dP)); }
  /// |ΔV| / |ΔP_F|
  [[nodiscard]] double volume_perimeter_ratio() const { return std::abs(dV) / std::abs(dP); }
};

/// Outer normal used for the cut at x_max: the unit vector along ∇F°(x_max),
/// which lies in the normal fan of the body there.
inline Eigen::Vector2d cut_direction(const Polygon2&, const FinslerNorm2& norm, const Eigen::Vector2d& x_max) {
  return norm.polar_grad(x_max).normalized();
}

/// Ω_ε = Ω ∩ {⟨x, d⟩ ≤ h_Ω(d) − ε} for every ε, compared against Ω.
inline std::vector<CutReport> cut_experiment(const Polygon2& body, const FinslerNorm2& norm, double p,
                                             const std::vector<double>& eps_list) {
  check_exponent(p);
  const auto base = functional_value(body, norm, p);
  const Eigen::Vector2d x_max = base.x_max;
  const Eigen::Vector2d d = cut_direction(body, norm, x_max);
  const double support = body.support(d);
  std::vector<CutReport> out;
  for (double eps : eps_list) {
    require(eps > 0.0, "cut depth must be positive");
    const Polygon2 cut = halfspace_cut(body, d, support - eps);
    const auto rep = functional_value(cut, norm, p);
    CutReport r;
    r.eps = eps;
    r.dV = rep.V - base.V;
    r.dP = rep.P_F - base.P_F;
    r.dM = rep.M_F - base.M_F;
    r.r_max = base.r_max;
    r.bound_rhs = p * std::pow(base.r_max, p - 1.0) * r.dV + std::pow(base.r_max, p) * r.dP;
    r.dF = rep.F_quotient - base.F_quotient;
    r.direction = d;
    out.push_back(r);
  }
  return out;
}

/// ε, ε/2, ε/4, ...
inline std::vector<double> halving_sequence(double eps0, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(eps0 * std::ldexp(1.0, -i));
  return out;
}

}  // namespace wulff_lab
