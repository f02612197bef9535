#pragma once

// Serializable descriptions of bodies, their quick textual form
// ("wulff:1,0.3,0", "box:1,1", "fourier:1,0,0,0.1,0", ...) and construction.

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/bodies.hpp"
#include "wulff_lab/error.hpp"
#include "wulff_lab/finsler.hpp"

namespace wulff_lab {

enum class ShapeKind { wulff, support_fourier, polygon, box, polytope, ellipse, cross_polytope };

inline const char* to_string(ShapeKind k) noexcept {
  switch (k) {
    case ShapeKind::wulff: return "wulff";
    case ShapeKind::support_fourier: return "support_fourier";
    case ShapeKind::polygon: return "polygon";
    case ShapeKind::box: return "box";
    case ShapeKind::polytope: return "polytope";
    case ShapeKind::ellipse: return "ellipse";
    case ShapeKind::cross_polytope: return "cross_polytope";
  }
  return "unknown";
}

struct ShapeSpec {
  ShapeKind kind = ShapeKind::wulff;
  double r = 1.0;                              // wulff radius, cross-polytope radius
  std::vector<double> center;                  // wulff, ellipse
  double a0 = 1.0;                             // support_fourier
  std::vector<std::array<double, 2>> coeffs;   // support_fourier, k = 1, 2, ...
  std::vector<std::vector<double>> vertices;   // polygon, polytope
  std::vector<Facet> facets;                   // polytope (optional: hull if empty)
  std::vector<double> halfwidths;              // box
  std::vector<double> semi_axes;               // ellipse
  double angle = 0.0;                          // ellipse
  int dim = 2;                                 // cross_polytope
  int grid = 0;                                // preferred grid size for curves (0: caller decides)

  static ShapeSpec make_wulff(double r, std::vector<double> center = {}) {
    ShapeSpec s;
    s.kind = ShapeKind::wulff;
    s.r = r;
    s.center = std::move(center);
    return s;
  }
  static ShapeSpec make_fourier(double a0, std::vector<std::array<double, 2>> coeffs) {
    ShapeSpec s;
    s.kind = ShapeKind::support_fourier;
    s.a0 = a0;
    s.coeffs = std::move(coeffs);
    return s;
  }
  static ShapeSpec make_box(std::vector<double> halfwidths) {
    ShapeSpec s;
    s.kind = ShapeKind::box;
    s.halfwidths = std::move(halfwidths);
    return s;
  }
  static ShapeSpec make_polygon(const std::vector<Eigen::Vector2d>& pts) {
    ShapeSpec s;
    s.kind = ShapeKind::polygon;
    for (const auto& p : pts) s.vertices.push_back({p.x(), p.y()});
    return s;
  }
  static ShapeSpec make_ellipse(double a, double b, double angle = 0.0, std::vector<double> center = {}) {
    ShapeSpec s;
    s.kind = ShapeKind::ellipse;
    s.semi_axes = {a, b};
    s.angle = angle;
    s.center = std::move(center);
    return s;
  }
  static ShapeSpec make_cross(int dim, double r = 1.0) {
    ShapeSpec s;
    s.kind = ShapeKind::cross_polytope;
    s.dim = dim;
    s.r = r;
    return s;
  }

  [[nodiscard]] bool is_curve() const noexcept {
    return kind == ShapeKind::wulff || kind == ShapeKind::support_fourier || kind == ShapeKind::ellipse;
  }
  [[nodiscard]] int dimension() const {
    switch (kind) {
      case ShapeKind::box: return static_cast<int>(halfwidths.size());
      case ShapeKind::polytope: return vertices.empty() ? 0 : static_cast<int>(vertices.front().size());
      case ShapeKind::cross_polytope: return dim;
      default: return 2;
    }
  }
};

/// The shape in its own dimension. The norm is needed only for Wulff shapes.
inline ConvexBody build(const ShapeSpec& s, const NormSpec& norm, int grid_size = 1024) {
  const AngleGrid grid(s.grid > 0 ? s.grid : grid_size);
  auto center2 = [&]() -> Eigen::Vector2d {
    if (s.center.empty()) return Eigen::Vector2d::Zero();
    require(s.center.size() == 2, "center must have two coordinates");
    return {s.center[0], s.center[1]};
  };
  switch (s.kind) {
    case ShapeKind::wulff: return wulff(FinslerNorm2::from_spec(norm), s.r, center2(), grid);
    case ShapeKind::support_fourier: return from_fourier(grid, s.a0, s.coeffs);
    case ShapeKind::ellipse:
      require(s.semi_axes.size() == 2, "ellipse needs two semi-axes");
      return ellipse(s.semi_axes[0], s.semi_axes[1], s.angle, center2(), grid);
    case ShapeKind::box: return box(s.halfwidths);
    case ShapeKind::polygon: {
      std::vector<Eigen::Vector2d> pts;
      for (const auto& v : s.vertices) {
        require(v.size() == 2, "polygon vertices must be 2-vectors");
        pts.emplace_back(v[0], v[1]);
      }
      require(pts.size() >= 3, "polygon needs at least 3 vertices");
      return Polygon2::from_loop(std::move(pts));
    }
    case ShapeKind::polytope: {
      std::vector<Eigen::VectorXd> pts;
      for (const auto& v : s.vertices) pts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      require(!pts.empty(), "polytope needs vertices");
      if (pts.front().size() == 2) {
        std::vector<Eigen::Vector2d> p2;
        for (const auto& p : pts) p2.emplace_back(p[0], p[1]);
        return convex_hull(std::move(p2));
      }
      if (s.facets.empty()) return PolytopeN::from_points(pts);
      return PolytopeN(std::move(pts), s.facets);
    }
    case ShapeKind::cross_polytope: return cross_polytope(s.dim, s.r);
  }
  throw Error(ErrorKind::invalid_argument, "unknown shape kind");
}

inline SupportCurve2 build_curve(const ShapeSpec& s, const NormSpec& norm, int grid_size = 1024) {
  require(s.is_curve(), std::string("shape kind '") + to_string(s.kind) + "' is not a smooth curve");
  return std::get<SupportCurve2>(build(s, norm, grid_size));
}

// ---------------------------------------------------------------------------
// Quick textual forms
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, what + ": cannot parse number '" + item + "'");
    }
  }
  return out;
}

inline std::pair<std::string, std::string> split_kind(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

}  // namespace detail

/// euclidean | elliptic:a,b[,...] | lp:q
inline NormSpec parse_norm(const std::string& text) {
  auto [kind, rest] = detail::split_kind(text);
  auto nums = detail::parse_numbers(rest, "norm");
  if (kind == "euclidean") {
    require(nums.empty(), "norm: euclidean takes no parameters");
    return NormSpec::euclidean();
  }
  if (kind == "elliptic") {
    require(nums.size() >= 2, "norm: elliptic needs at least two axes, e.g. elliptic:1,2");
    return NormSpec::elliptic_axes(nums);
  }
  if (kind == "lp") {
    require(nums.size() == 1, "norm: lp needs one exponent, e.g. lp:3");
    return NormSpec::lp(nums[0]);
  }
  throw Error(ErrorKind::invalid_argument, "norm: unknown kind '" + kind + "'");
}

inline std::string to_string(const NormSpec& n) {
  switch (n.kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::lp: return "lp:" + detail::fmt15(n.q);
    case NormKind::elliptic: {
      std::string s = "elliptic:";
      if (!n.axes.empty()) {
        for (std::size_t i = 0; i < n.axes.size(); ++i) s += (i ? "," : "") + detail::fmt15(n.axes[i]);
        return s;
      }
      // diagonal matrices round-trip through axes; others are only representable in JSON
      for (std::size_t i = 0; i < n.matrix.size(); ++i) s += (i ? "," : "") + detail::fmt15(1.0 / std::sqrt(n.matrix[i][i]));
      return s;
    }
  }
  return "?";
}

/// wulff:r[,cx,cy] | fourier:a0[,a1,b1,a2,b2,...] | box:h1,h2[,...] |
/// polygon:x1,y1,x2,y2,... | ellipse:a,b[,angle[,cx,cy]] | cross:n[,r]
inline ShapeSpec parse_shape(const std::string& text) {
  auto [kind, rest] = detail::split_kind(text);
  auto nums = detail::parse_numbers(rest, "shape");
  if (kind == "wulff") {
    require(nums.size() == 1 || nums.size() == 3, "shape: wulff takes r or r,cx,cy");
    std::vector<double> c;
    if (nums.size() == 3) c = {nums[1], nums[2]};
    return ShapeSpec::make_wulff(nums[0], c);
  }
  if (kind == "fourier") {
    require(!nums.empty() && nums.size() % 2 == 1, "shape: fourier takes a0 followed by (a_k, b_k) pairs");
    std::vector<std::array<double, 2>> c;
    for (std::size_t i = 1; i + 1 < nums.size(); i += 2) c.push_back({nums[i], nums[i + 1]});
    return ShapeSpec::make_fourier(nums[0], c);
  }
  if (kind == "box") {
    require(nums.size() >= 2, "shape: box needs at least two halfwidths");
    return ShapeSpec::make_box(nums);
  }
  if (kind == "polygon") {
    require(nums.size() >= 6 && nums.size() % 2 == 0, "shape: polygon needs at least three x,y pairs");
    std::vector<Eigen::Vector2d> pts;
    for (std::size_t i = 0; i < nums.size(); i += 2) pts.emplace_back(nums[i], nums[i + 1]);
    return ShapeSpec::make_polygon(pts);
  }
  if (kind == "ellipse") {
    require(nums.size() == 2 || nums.size() == 3 || nums.size() == 5, "shape: ellipse takes a,b[,angle[,cx,cy]]");
    std::vector<double> c;
    if (nums.size() == 5) c = {nums[3], nums[4]};
    return ShapeSpec::make_ellipse(nums[0], nums[1], nums.size() >= 3 ? nums[2] : 0.0, c);
  }
  if (kind == "cross") {
    require(nums.size() == 1 || nums.size() == 2, "shape: cross takes n[,r]");
    return ShapeSpec::make_cross(static_cast<int>(nums[0]), nums.size() == 2 ? nums[1] : 1.0);
  }
  throw Error(ErrorKind::invalid_argument, "shape: unknown kind '" + kind + "'");
}

inline std::string to_string(const ShapeSpec& s) {
  using detail::fmt15;
  std::string out;
  auto list = [&](const std::vector<double>& v) {
    for (double x : v) out += "," + fmt15(x);
  };
  switch (s.kind) {
    case ShapeKind::wulff:
      out = "wulff:" + fmt15(s.r);
      if (!s.center.empty()) list(s.center);
      return out;
    case ShapeKind::support_fourier:
      out = "fourier:" + fmt15(s.a0);
      for (const auto& c : s.coeffs) out += "," + fmt15(c[0]) + "," + fmt15(c[1]);
      return out;
    case ShapeKind::box:
      out = "box:";
      for (std::size_t i = 0; i < s.halfwidths.size(); ++i) out += (i ? "," : "") + fmt15(s.halfwidths[i]);
      return out;
    case ShapeKind::polygon:
      out = "polygon:";
      for (std::size_t i = 0; i < s.vertices.size(); ++i)
        out += (i ? "," : "") + fmt15(s.vertices[i][0]) + "," + fmt15(s.vertices[i][1]);
      return out;
    case ShapeKind::ellipse:
      out = "ellipse:" + fmt15(s.semi_axes.at(0)) + "," + fmt15(s.semi_axes.at(1));
      if (s.angle != 0.0 || !s.center.empty()) out += "," + fmt15(s.angle);
      if (!s.center.empty()) list(s.center);
      return out;
    case ShapeKind::cross_polytope: return "cross:" + std::to_string(s.dim) + "," + fmt15(s.r);
    case ShapeKind::polytope: {
      out = "polytope:" + std::to_string(s.vertices.size()) + " vertices";
      return out;
    }
  }
  return out;
}

}  // namespace wulff_lab
