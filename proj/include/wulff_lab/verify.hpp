#pragma once

// Randomized verification suites for the inequalities around 𝓕, and a
// descent search over Fourier coefficients of the support function.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/functionals.hpp"
#include "wulff_lab/iamcf.hpp"
#include "wulff_lab/parallel.hpp"
#include "wulff_lab/shapes.hpp"
#include "wulff_lab/variation.hpp"

namespace wulff_lab {

// ---------------------------------------------------------------------------
// Portable randomness
// ---------------------------------------------------------------------------

/// mt19937_64 with a hand-rolled 53-bit uniform, so streams agree across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

/// splitmix64 of (seed, index): independent per-case streams.
inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Family { fourier, polygon, box, ellipse, elongated };

inline const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::fourier: return "fourier";
    case Family::polygon: return "polygon";
    case Family::box: return "box";
    case Family::ellipse: return "ellipse";
    case Family::elongated: return "elongated";
  }
  return "?";
}

struct BodyParams {
  int modes = 6;             // fourier: highest mode K
  double amplitude = 0.3;    // fourier: |a_k|, |b_k| ≤ amplitude / k²
  double margin = 0.05;      // fourier: required min(h + h'')
  double shift = 0.0;        // fourier: |a_1|, |b_1| ≤ shift (translation)
  int points = 12;           // polygon: number of random points
  double eps = -1.0;         // box: R_ε, ellipse: E_ε; negative means random
  double a = 1.0, b = 1.0;   // ellipse: axes of the norm defining E_ε
  int max_tries = 10000;
};

inline ShapeSpec random_shape(std::uint64_t seed, Family family, const BodyParams& prm = {}) {
  Rng rng(seed);
  switch (family) {
    case Family::fourier: {
      require(prm.modes >= 2 && prm.amplitude >= 0.0, "fourier family needs modes >= 2");
      constexpr int kCheck = 512;
      for (int attempt = 0; attempt < prm.max_tries; ++attempt) {
        std::vector<std::array<double, 2>> c(static_cast<std::size_t>(prm.modes));
        c[0] = {rng.uniform(-prm.shift, prm.shift), rng.uniform(-prm.shift, prm.shift)};
        for (int k = 2; k <= prm.modes; ++k) {
          const double bound = prm.amplitude / (k * k);
          c[k - 1] = {rng.uniform(-bound, bound), rng.uniform(-bound, bound)};
        }
        double worst = std::numeric_limits<double>::infinity();
        for (int j = 0; j < kCheck; ++j) {
          const double th = 2.0 * std::numbers::pi * j / kCheck;
          double v = 1.0;
          for (int k = 2; k <= prm.modes; ++k) v += (1.0 - k * k) * (c[k - 1][0] * std::cos(k * th) + c[k - 1][1] * std::sin(k * th));
          worst = std::min(worst, v);
        }
        if (worst > prm.margin) return ShapeSpec::make_fourier(1.0, std::move(c));
      }
      throw Error(ErrorKind::rejection_exhausted, "no convex fourier body after " + std::to_string(prm.max_tries) + " tries");
    }
    case Family::polygon: {
      require(prm.points >= 3, "polygon family needs at least 3 points");
      for (int attempt = 0; attempt < prm.max_tries; ++attempt) {
        std::vector<Eigen::Vector2d> pts;
        for (int i = 0; i < prm.points; ++i) {
          const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
          const double r = rng.uniform(0.6, 1.4);
          pts.emplace_back(r * std::cos(th), r * std::sin(th));
        }
        try {
          Polygon2 hull = convex_hull(pts);
          bool interior = true;
          for (std::size_t i = 0; i < hull.size(); ++i)
            interior &= hull.outward_normal(i).dot(hull.vertex(i)) > 0.1;
          if (interior) return ShapeSpec::make_polygon(hull.vertices());
        } catch (const Error&) {
        }
      }
      throw Error(ErrorKind::rejection_exhausted, "no polygon containing the origin after " + std::to_string(prm.max_tries) + " tries");
    }
    case Family::box: {
      if (prm.eps > 0.0) return ShapeSpec::make_box({1.0 / prm.eps, prm.eps});
      return ShapeSpec::make_box({rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)});
    }
    case Family::ellipse: {
      if (prm.eps >= 0.0) {
        require(prm.eps < 1.0, "E_eps needs eps < 1");
        return ShapeSpec::make_ellipse(1.0 / (prm.a * (1.0 - prm.eps)), 1.0 / (prm.b * (1.0 + prm.eps)));
      }
      const double sa = rng.uniform(0.5, 1.5), sb = rng.uniform(0.5, 1.5);
      const double angle = rng.uniform(0.0, std::numbers::pi);
      const double cx = rng.uniform(-0.2, 0.2), cy = rng.uniform(-0.2, 0.2);
      return ShapeSpec::make_ellipse(sa, sb, angle, {cx, cy});
    }
    case Family::elongated: {
      const double ratio = rng.uniform(5.0, 12.0);
      const double angle = rng.uniform(0.0, std::numbers::pi);
      return ShapeSpec::make_ellipse(std::sqrt(ratio), 1.0 / std::sqrt(ratio), angle);
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown family");
}

inline ConvexBody random_body(std::uint64_t seed, Family family, const BodyParams& prm = {},
                              const NormSpec& norm = NormSpec::euclidean(), int grid = 1024) {
  return build(random_shape(seed, family, prm), norm, grid);
}

/// The E_ε body {a²(1−ε)²x² + b²(1+ε)²y² ≤ 1} for an elliptic norm with axes (a, b).
inline ShapeSpec e_eps_shape(double eps, double a, double b) {
  BodyParams prm;
  prm.eps = eps;
  prm.a = a;
  prm.b = b;
  return random_shape(0, Family::ellipse, prm);
}

/// (a, b) with F(x, y) = sqrt(x²/a² + y²/b²); (1, 1) for other kinds.
inline std::pair<double, double> planar_axes(const NormSpec& spec) {
  if (spec.kind != NormKind::elliptic) return {1.0, 1.0};
  if (!spec.axes.empty()) return {spec.axes[0], spec.axes.size() > 1 ? spec.axes[1] : 1.0};
  return {1.0 / std::sqrt(spec.matrix[0][0]), 1.0 / std::sqrt(spec.matrix[1][1])};
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

enum class Suite { main, iso, hk, ratio, secineq, excessdescent, cuts, dichotomy, betta };

inline const char* to_string(Suite s) noexcept {
  switch (s) {
    case Suite::main: return "main";
    case Suite::iso: return "iso";
    case Suite::hk: return "hk";
    case Suite::ratio: return "ratio";
    case Suite::secineq: return "secineq";
    case Suite::excessdescent: return "excessdescent";
    case Suite::cuts: return "cuts";
    case Suite::dichotomy: return "dichotomy";
    case Suite::betta: return "betta";
  }
  return "?";
}

inline Suite parse_suite(const std::string& name) {
  for (Suite s : {Suite::main, Suite::iso, Suite::hk, Suite::ratio, Suite::secineq, Suite::excessdescent, Suite::cuts,
                  Suite::dichotomy, Suite::betta})
    if (name == to_string(s)) return s;
  throw Error(ErrorKind::invalid_argument, "unknown suite '" + name + "'");
}

inline double suite_tolerance(Suite s) {
  switch (s) {
    case Suite::excessdescent:
    case Suite::dichotomy: return 0.0;
    case Suite::cuts: return 1e-12;
    default: return 1e-8;
  }
}

/// One evaluated case. `value` and `bound` are the two sides of the suite's
/// inequality; `margin` is its normalized slack (negative = violation).
struct SuiteRow {
  int index = 0;
  std::string family;
  std::string shape;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double E_F = std::nan("");
  double fit_distance = std::nan("");
  double center_norm = std::nan("");
  std::string note;
};

struct SuiteReport {
  std::string name;
  std::string norm;
  double p = 2.0;
  int n_cases = 0;
  double tolerance = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_shape;
  std::vector<SuiteRow> rows;

  [[nodiscard]] bool passed() const { return worst_margin >= -tolerance; }
};

struct SuiteOptions {
  int grid = 1024;
  BodyParams params;
  bool appendix_3d = true;
  /// Cut depths as fractions of the body's width in the cut direction.
  std::vector<double> cut_fractions = {0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  double zero_band = 1e-6;
};

struct SuiteCase {
  std::string family;
  ShapeSpec shape;
};

namespace detail {

inline bool suite_takes_polygons(Suite s) { return s != Suite::hk && s != Suite::excessdescent; }
inline bool suite_takes_3d(Suite s) { return s == Suite::main || s == Suite::iso || s == Suite::ratio; }
inline bool suite_takes_elongated(Suite s) { return s == Suite::excessdescent || s == Suite::dichotomy; }

inline std::vector<SuiteCase> suite_cases(Suite suite, const NormSpec& norm, int n_cases, std::uint64_t seed,
                                          const SuiteOptions& opt) {
  std::vector<SuiteCase> cases;
  const bool polys = suite_takes_polygons(suite);
  auto [a, b] = planar_axes(norm);
  cases.push_back({"wulff", ShapeSpec::make_wulff(1.0)});
  cases.push_back({"wulff_translated", ShapeSpec::make_wulff(1.0, {0.3, 0.0})});
  cases.push_back({"ellipse", e_eps_shape(0.05, a, b)});
  if (polys) {
    cases.push_back({"box", ShapeSpec::make_box({1.0, 1.0})});
    cases.push_back({"box", ShapeSpec::make_box({10.0, 0.1})});
  }
  for (int i = 0; i < n_cases; ++i)
    cases.push_back({"fourier", random_shape(case_seed(seed, static_cast<std::uint64_t>(i)), Family::fourier, opt.params)});
  if (polys)
    for (int i = 0; i < n_cases / 5; ++i)
      cases.push_back({"polygon", random_shape(case_seed(seed ^ 0x706f6c79ULL, static_cast<std::uint64_t>(i)), Family::polygon, opt.params)});
  if (suite_takes_elongated(suite))
    for (int i = 0; i < std::max(1, n_cases / 5); ++i)
      cases.push_back({"elongated", random_shape(case_seed(seed ^ 0x656c6f6eULL, static_cast<std::uint64_t>(i)), Family::elongated, opt.params)});
  if (opt.appendix_3d && suite_takes_3d(suite)) {
    cases.push_back({"box3", ShapeSpec::make_box({1.0, 1.0, 1.0})});
    cases.push_back({"cross3", ShapeSpec::make_cross(3, 1.0)});
    Rng rng(case_seed(seed ^ 0x33644444ULL, 0));
    for (int i = 0; i < 4; ++i)
      cases.push_back({"box3", ShapeSpec::make_box({rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0)})});
    for (int i = 0; i < 2; ++i) {
      ShapeSpec s;
      s.kind = ShapeKind::polytope;
      for (int k = 0; k < 16; ++k) {
        Eigen::Vector3d v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        v = v.normalized() * rng.uniform(0.8, 1.2);
        s.vertices.push_back({v.x(), v.y(), v.z()});
      }
      cases.push_back({"hull3", std::move(s)});
    }
  }
  return cases;
}

// Wulff fit of a planar body rescaled to V = κ_n.
inline WulffFit normalized_fit(const ConvexBody& body, const FinslerNorm2& norm, double vol, int grid) {
  const double lambda = std::sqrt(norm.unit_wulff_volume() / vol);
  if (const auto* c = std::get_if<SupportCurve2>(&body)) return fit_wulff(c->scaled(lambda), norm);
  const auto& poly = std::get<Polygon2>(body);
  const AngleGrid g(grid);
  auto h = support_samples(poly, g);
  for (double& v : h) v *= lambda;
  return fit_wulff(g, h, norm);
}

inline Polygon2 as_polygon(const ConvexBody& body) {
  if (const auto* c = std::get_if<SupportCurve2>(&body)) return curve_to_polygon(*c);
  return std::get<Polygon2>(body);
}

inline double width_along(const Polygon2& poly, const Eigen::Vector2d& d) {
  return poly.support(d) + poly.support(-d);
}

struct CutScan {
  std::vector<CutReport> reports;
  double min_dF_rel = std::numeric_limits<double>::infinity();
};

inline CutScan cut_scan(const Polygon2& poly, const FinslerNorm2& norm, double p, const SuiteOptions& opt) {
  const auto base = functional_value(poly, norm, p);
  const Eigen::Vector2d d = cut_direction(poly, norm, base.x_max);
  const double w = width_along(poly, d);
  std::vector<double> eps;
  for (double f : opt.cut_fractions) eps.push_back(f * w);
  CutScan scan;
  scan.reports = cut_experiment(poly, norm, p, eps);
  for (const auto& r : scan.reports) scan.min_dF_rel = std::min(scan.min_dF_rel, r.dF / base.F_quotient);
  return scan;
}

inline SuiteRow evaluate_case(Suite suite, const SuiteCase& sc, const NormSpec& nspec, double p, const SuiteOptions& opt) {
  SuiteRow row;
  row.family = sc.family;
  row.shape = to_string(sc.shape);
  const ConvexBody body = build(sc.shape, nspec, opt.grid);
  const int n = dimension(body);
  const bool smooth = std::holds_alternative<SupportCurve2>(body);

  if (n != 2) {
    const auto norm = FinslerNormX::from_spec(nspec, n);
    const auto& poly = std::get<PolytopeN>(body);
    const auto rep = functional_value(poly, norm, p);
    row.E_F = rep.E_F;
    switch (suite) {
      case Suite::main:
        row.value = rep.F_quotient, row.bound = rep.lower_bound();
        row.margin = (row.value - row.bound) / row.bound;
        break;
      case Suite::iso:
        row.value = rep.P_F;
        row.bound = n * std::pow(rep.kappa_n, 1.0 / n) * std::pow(rep.V, 1.0 - 1.0 / n);
        row.margin = (row.value - row.bound) / row.bound;
        break;
      case Suite::ratio:
        row.value = rep.M_F / rep.P_F, row.bound = std::pow(rep.r_max, p);
        row.margin = (row.bound - row.value) / row.bound;
        break;
      default: throw Error(ErrorKind::invalid_argument, "suite has no 3D cases");
    }
    return row;
  }

  const auto norm = FinslerNorm2::from_spec(nspec);
  auto report_of = [&]() {
    return std::visit(
        [&](const auto& bd) -> FunctionalReport {
          using B = std::decay_t<decltype(bd)>;
          if constexpr (std::is_same_v<B, PolytopeN>) throw Error(ErrorKind::invalid_argument, "unexpected polytope");
          else if constexpr (std::is_same_v<B, SupportCurve2>) return functional_value(bd, norm, p, false);
          else return functional_value(bd, norm, p);
        },
        body);
  };
  const auto rep = report_of();
  row.E_F = rep.E_F;

  switch (suite) {
    case Suite::main: {
      row.value = rep.F_quotient;
      row.bound = rep.lower_bound();
      row.margin = (row.value - row.bound) / row.bound;
      const auto fit = normalized_fit(body, norm, rep.V, opt.grid);
      row.fit_distance = fit.distance;
      row.center_norm = fit.center.norm();
      break;
    }
    case Suite::iso:
      row.value = rep.P_F;
      row.bound = 2.0 * std::sqrt(rep.kappa_n * rep.V);
      row.margin = (row.value - row.bound) / row.bound;
      break;
    case Suite::hk: {
      const auto& c = std::get<SupportCurve2>(body);
      row.value = heintze_karcher(c, norm);
      row.bound = 2.0 * rep.V;
      row.margin = (row.value - row.bound) / row.bound;
      break;
    }
    case Suite::ratio:
      row.value = rep.M_F / rep.P_F;
      row.bound = std::pow(rep.r_max, p);
      row.margin = (row.bound - row.value) / row.bound;
      break;
    case Suite::secineq: {
      row.value = smooth ? sec_ineq_integral(std::get<SupportCurve2>(body), norm, p)
                         : sec_ineq_integral(std::get<Polygon2>(body), norm, p);
      row.bound = 0.0;
      row.margin = -row.value / (rep.M_F / rep.V);
      break;
    }
    case Suite::excessdescent: {
      const auto& c = std::get<SupportCurve2>(body);
      row.bound = 0.0;
      if (rep.E_F < -opt.zero_band) {
        row.value = dF_quotient_iamcf(c, norm, p);
        row.margin = -row.value / rep.F_quotient;
      } else {
        row.value = std::nan("");
        row.margin = std::nan("");
        row.note = "E_F >= 0: not applicable";
      }
      break;
    }
    case Suite::cuts: {
      const Polygon2 poly = as_polygon(body);
      const auto scan = cut_scan(poly, norm, p, opt);
      double worst = std::numeric_limits<double>::infinity(), sup_ratio = 0.0;
      for (const auto& r : scan.reports) {
        worst = std::min({worst, -r.dV / rep.V, -r.dP / rep.P_F});
        sup_ratio = std::max(sup_ratio, r.volume_perimeter_ratio());
      }
      row.value = sup_ratio;
      row.bound = scan.reports.back().bound_ratio();
      row.margin = worst;
      break;
    }
    case Suite::dichotomy: {
      if (rep.E_F < -opt.zero_band) {
        if (!smooth) {
          row.margin = std::nan("");
          row.note = "negative excess on a polygon: smooth approximation required";
          break;
        }
        row.value = dF_quotient_iamcf(std::get<SupportCurve2>(body), norm, p);
        row.margin = -row.value / rep.F_quotient;
        row.note = "negative: flow descent";
      } else if (rep.E_F > opt.zero_band) {
        const auto scan = cut_scan(as_polygon(body), norm, p, opt);
        row.value = scan.min_dF_rel;
        row.margin = -scan.min_dF_rel;
        row.note = "positive: cut descent";
      } else {
        const auto fit = normalized_fit(body, norm, rep.V, opt.grid);
        row.fit_distance = fit.distance;
        row.center_norm = fit.center.norm();
        double close = 1e-2 - std::max(fit.distance, fit.center.norm());
        if (close < 0.0) {
          const auto scan = cut_scan(as_polygon(body), norm, p, opt);
          close = -scan.min_dF_rel;
          row.note = "zero: cut descent";
        } else {
          row.note = "zero: wulff";
        }
        row.margin = close;
      }
      break;
    }
    case Suite::betta: {
      // (∮|x|^p)^n ≥ n^n ω_n^{1−p} V^{n+p−1}, in logs
      const auto e = FinslerNorm2::euclidean();
      const double mom = std::visit(
          [&](const auto& bd) -> double {
            using B = std::decay_t<decltype(bd)>;
            if constexpr (std::is_same_v<B, PolytopeN>) return 0.0;
            else return momentum_f(bd, e, p);
          },
          body);
      row.value = 2.0 * std::log(mom);
      row.bound = 2.0 * std::log(2.0) + (1.0 - p) * std::log(std::numbers::pi) + (1.0 + p) * std::log(rep.V);
      row.margin = row.value - row.bound;
      break;
    }
  }
  return row;
}

}  // namespace detail

inline SuiteReport run_suite(Suite suite, const NormSpec& norm, double p, int n_cases, std::uint64_t seed,
                             const SuiteOptions& opt = {}) {
  check_exponent(p);
  require(n_cases >= 0, "n_cases must be nonnegative");
  const auto cases = detail::suite_cases(suite, norm, n_cases, seed, opt);
  auto rows = parallel_map(cases.size(), [&](std::size_t i) {
    SuiteRow row;
    try {
      row = detail::evaluate_case(suite, cases[i], norm, p, opt);
    } catch (const Error& e) {
      row.family = cases[i].family;
      row.shape = to_string(cases[i].shape);
      row.margin = -std::numeric_limits<double>::infinity();
      row.note = e.what();
    }
    row.index = static_cast<int>(i);
    return row;
  });
  SuiteReport rep;
  rep.name = to_string(suite);
  rep.norm = to_string(norm);
  rep.p = p;
  rep.n_cases = static_cast<int>(rows.size());
  rep.tolerance = suite_tolerance(suite);
  for (const auto& r : rows) {
    if (std::isnan(r.margin)) continue;
    if (r.margin < rep.worst_margin) {
      rep.worst_margin = r.margin;
      rep.worst_shape = r.shape;
    }
  }
  rep.rows = std::move(rows);
  return rep;
}

// ---------------------------------------------------------------------------
// Descent search
// ---------------------------------------------------------------------------

struct SearchConfig {
  int modes = 32;
  int grid = 512;
  int max_iterations = 500;
  double grad_tol = 1e-7;    // on the preconditioned gradient norm, relative to 𝓕
  double convexity_margin = 1e-3;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct SearchResult {
  std::vector<double> trajectory;
  SupportCurve2 final_shape;
  ShapeSpec final_spec;
  double final_F = 0.0;
  WulffFit fit;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

struct FourierBasis {
  AngleGrid grid;
  int modes;
  std::vector<std::vector<double>> cosk, sink;

  FourierBasis(int n, int k) : grid(n), modes(k) {
    cosk.assign(static_cast<std::size_t>(k + 1), std::vector<double>(static_cast<std::size_t>(n)));
    sink = cosk;
    for (int m = 0; m <= k; ++m)
      for (int j = 0; j < n; ++j) {
        cosk[m][j] = std::cos(m * grid.theta(j));
        sink[m][j] = std::sin(m * grid.theta(j));
      }
  }

  // coefficient layout: [a0, a1, b1, ..., aK, bK]
  [[nodiscard]] std::vector<double> synth(const Eigen::VectorXd& c) const {
    std::vector<double> h(static_cast<std::size_t>(grid.size()), c[0]);
    for (int m = 1; m <= modes; ++m)
      for (int j = 0; j < grid.size(); ++j) h[j] += c[2 * m - 1] * cosk[m][j] + c[2 * m] * sink[m][j];
    return h;
  }

  [[nodiscard]] Eigen::VectorXd analyze(std::span<const double> h) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * modes + 1);
    const double n = grid.size();
    for (int j = 0; j < grid.size(); ++j) c[0] += h[j] / n;
    for (int m = 1; m <= modes; ++m)
      for (int j = 0; j < grid.size(); ++j) {
        c[2 * m - 1] += 2.0 * h[j] * cosk[m][j] / n;
        c[2 * m] += 2.0 * h[j] * sink[m][j] / n;
      }
    return c;
  }

  [[nodiscard]] Eigen::VectorXd project_gradient(const std::vector<double>& g) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * modes + 1);
    const double dt = grid.step();
    for (int j = 0; j < grid.size(); ++j) out[0] += g[j] * dt;
    for (int m = 1; m <= modes; ++m)
      for (int j = 0; j < grid.size(); ++j) {
        out[2 * m - 1] += g[j] * cosk[m][j] * dt;
        out[2 * m] += g[j] * sink[m][j] * dt;
      }
    return out;
  }

  [[nodiscard]] ShapeSpec spec(const Eigen::VectorXd& c) const {
    std::vector<std::array<double, 2>> coeffs;
    for (int m = 1; m <= modes; ++m) coeffs.push_back({c[2 * m - 1], c[2 * m]});
    ShapeSpec s = ShapeSpec::make_fourier(c[0], std::move(coeffs));
    s.grid = grid.size();
    return s;
  }

  [[nodiscard]] SupportCurve2 curve(const Eigen::VectorXd& c) const {
    const auto s = spec(c);
    return SupportCurve2(grid, synth(c), FourierRecord{s.a0, s.coeffs});
  }
};

}  // namespace detail

/// Preconditioned projected gradient descent on the Fourier coefficients of h.
/// Each accepted iterate is rescaled to V = κ_n; trial steps that break the
/// convexity margin are treated as failed Armijo tests.
inline SearchResult minimize(const FinslerNorm2& norm, double p, const SupportCurve2& init, const SearchConfig& cfg = {}) {
  check_exponent(p);
  require(cfg.modes >= 1, "search needs at least one Fourier mode");
  const detail::FourierBasis basis(cfg.grid, cfg.modes);
  const double kappa = norm.unit_wulff_volume();

  std::vector<double> h0(static_cast<std::size_t>(cfg.grid));
  for (int j = 0; j < cfg.grid; ++j) h0[j] = init.support_at(basis.grid.theta(j));
  Eigen::VectorXd c = basis.analyze(h0);

  auto normalize = [&](Eigen::VectorXd& coef) {
    const SupportCurve2 cur = basis.curve(coef);
    coef *= std::sqrt(kappa / volume(cur));
  };
  auto objective = [&](const Eigen::VectorXd& coef) -> double {
    try {
      const SupportCurve2 cur = basis.curve(coef);
      if (cur.min_radius_of_curvature() < cfg.convexity_margin * coef[0]) return std::numeric_limits<double>::infinity();
      for (double v : cur.support())
        if (v <= 0.0) return std::numeric_limits<double>::infinity();
      return quotient(momentum_f(cur, norm, p), perimeter_f(cur, norm), volume(cur), p, 2);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  normalize(c);
  double value = objective(c);
  if (!std::isfinite(value)) throw Error(ErrorKind::not_convex, "initial body violates the convexity margin");
  Eigen::VectorXd precond(c.size());
  precond[0] = 0.0;  // scale is fixed by the normalization
  for (int m = 1; m <= cfg.modes; ++m) precond[2 * m - 1] = precond[2 * m] = 1.0 / (1.0 + m * m);

  SearchResult res{{value}, basis.curve(c), {}, value, {}, 0, false};
  double alpha = 1.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto g = basis.project_gradient(quotient_gradient(basis.curve(c), norm, p));
    const Eigen::VectorXd dir = -(precond.array() * g.array()).matrix();
    const double slope = g.dot(dir);
    if (std::sqrt(-slope) <= cfg.grad_tol * value) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    alpha = std::min(1e3, alpha * 2.0);
    for (int bt = 0; bt < cfg.max_backtracks; ++bt, alpha *= 0.5) {
      Eigen::VectorXd trial = c + alpha * dir;
      const double tv = objective(trial);
      if (tv <= value + cfg.armijo * alpha * slope) {
        normalize(trial);
        const double nv = objective(trial);
        if (!(nv <= value)) continue;
        c = std::move(trial);
        value = nv;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // no decrease available at machine precision: stationary in practice
      if (std::sqrt(-slope) <= 1e3 * cfg.grad_tol * value) {
        res.converged = true;
        break;
      }
      throw Error(ErrorKind::line_search_failed, "no Armijo step after " + std::to_string(cfg.max_backtracks) +
                                                     " halvings at iteration " + std::to_string(it));
    }
    res.trajectory.push_back(value);
    res.iterations = it + 1;
  }
  res.final_shape = basis.curve(c);
  res.final_spec = basis.spec(c);
  res.final_F = value;
  res.fit = fit_wulff(res.final_shape, norm);
  return res;
}

}  // namespace wulff_lab
