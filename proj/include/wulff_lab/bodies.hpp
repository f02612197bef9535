#pragma once

// Convex bodies: planar support-function curves, planar polygons and
// facet-described polytopes in R^n.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/angle_grid.hpp"
#include "wulff_lab/error.hpp"
#include "wulff_lab/finsler.hpp"

namespace wulff_lab {

/// Provenance of a curve built from a truncated Fourier series
/// h(θ) = a0 + Σ_k (a_k cos kθ + b_k sin kθ), k = 1, 2, ...
struct FourierRecord {
  double a0 = 0.0;
  std::vector<std::array<double, 2>> coeffs;

  [[nodiscard]] double eval(double theta) const {
    double h = a0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      double kt = static_cast<double>(k + 1) * theta;
      h += coeffs[k][0] * std::cos(kt) + coeffs[k][1] * std::sin(kt);
    }
    return h;
  }
};

// ---------------------------------------------------------------------------
// SupportCurve2
// ---------------------------------------------------------------------------

/// A strictly convex planar body given by its support function sampled on a
/// periodic angle grid. Boundary point at normal angle θ is
/// x(θ) = h u(θ) + h' u⊥(θ); the radius of curvature there is ρ = h + h''.
class SupportCurve2 {
 public:
  SupportCurve2(AngleGrid grid, std::vector<double> support, std::optional<FourierRecord> fourier = std::nullopt)
      : grid_(std::move(grid)), h_(std::move(support)), fourier_(std::move(fourier)) {
    require(static_cast<int>(h_.size()) == grid_.size(), "support samples must match the grid size");
    for (double v : h_) require(std::isfinite(v), "support samples must be finite");
    d1_ = periodic_d1(h_, grid_.step());
    rho_ = periodic_plus_d2(h_, grid_.step());
    auto worst = std::min_element(rho_.begin(), rho_.end());
    if (!(*worst > 0.0)) {
      auto j = worst - rho_.begin();
      throw Error(ErrorKind::not_convex, "h + h'' = " + std::to_string(*worst) + " at node " + std::to_string(j) +
                                             " (theta = " + std::to_string(grid_.theta(static_cast<int>(j))) + ")");
    }
  }

  [[nodiscard]] const AngleGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] int size() const noexcept { return grid_.size(); }
  [[nodiscard]] std::span<const double> support() const noexcept { return h_; }
  [[nodiscard]] std::span<const double> support_d1() const noexcept { return d1_; }
  /// ρ = h + h'' at every node.
  [[nodiscard]] std::span<const double> radius_of_curvature() const noexcept { return rho_; }
  [[nodiscard]] const std::optional<FourierRecord>& fourier() const noexcept { return fourier_; }

  [[nodiscard]] Eigen::Vector2d point(int j) const { return h_[j] * grid_.unit(j) + d1_[j] * grid_.unit_perp(j); }
  [[nodiscard]] Eigen::Vector2d normal(int j) const { return grid_.unit(j); }
  [[nodiscard]] double curvature(int j) const { return 1.0 / rho_[j]; }

  [[nodiscard]] double support_at(double theta) const {
    if (fourier_) return fourier_->eval(theta);
    return periodic_interpolate(h_, grid_.step(), theta).value;
  }
  [[nodiscard]] Eigen::Vector2d point_at(double theta) const {
    auto lv = periodic_interpolate(h_, grid_.step(), theta);
    return lv.value * unit_at(theta) + lv.derivative * unit_perp_at(theta);
  }
  [[nodiscard]] Eigen::Vector2d normal_at(double theta) const { return unit_at(theta); }
  [[nodiscard]] double curvature_at(double theta) const {
    return 1.0 / periodic_interpolate(rho_, grid_.step(), theta).value;
  }

  [[nodiscard]] double min_radius_of_curvature() const { return *std::min_element(rho_.begin(), rho_.end()); }

  /// λΩ, scaling about the origin.
  [[nodiscard]] SupportCurve2 scaled(double lambda) const {
    require(lambda > 0.0, "scale factor must be positive");
    std::vector<double> h = h_;
    for (double& v : h) v *= lambda;
    std::optional<FourierRecord> fr = fourier_;
    if (fr) {
      fr->a0 *= lambda;
      for (auto& c : fr->coeffs) c[0] *= lambda, c[1] *= lambda;
    }
    return SupportCurve2(grid_, std::move(h), std::move(fr));
  }

  [[nodiscard]] SupportCurve2 translated(const Eigen::Vector2d& shift) const {
    std::vector<double> h = h_;
    for (int j = 0; j < grid_.size(); ++j) h[j] += shift.dot(grid_.unit(j));
    std::optional<FourierRecord> fr = fourier_;
    if (fr) {
      if (fr->coeffs.empty()) fr->coeffs.push_back({0.0, 0.0});
      fr->coeffs[0][0] += shift.x();
      fr->coeffs[0][1] += shift.y();
    }
    return SupportCurve2(grid_, std::move(h), std::move(fr));
  }

 private:
  AngleGrid grid_;
  std::vector<double> h_;
  std::vector<double> d1_;
  std::vector<double> rho_;
  std::optional<FourierRecord> fourier_;
};

/// W_r(center) = {ξ : F°(ξ − center) < r}; its support function is r F(u) + ⟨center, u⟩.
inline SupportCurve2 wulff(const FinslerNorm2& norm, double r, const Eigen::Vector2d& center = Eigen::Vector2d::Zero(),
                           const AngleGrid& grid = AngleGrid()) {
  require(r > 0.0 && std::isfinite(r), "Wulff radius must be positive");
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) h[j] = r * norm(grid.unit(j)) + center.dot(grid.unit(j));
  return SupportCurve2(grid, std::move(h));
}

inline SupportCurve2 from_fourier(const AngleGrid& grid, double a0, std::vector<std::array<double, 2>> coeffs) {
  FourierRecord rec{a0, std::move(coeffs)};
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) h[j] = rec.eval(grid.theta(j));
  return SupportCurve2(grid, std::move(h), std::move(rec));
}

/// Ellipse with semi-axes (major along `angle`, minor across it) centred at `center`.
inline SupportCurve2 ellipse(double semi_a, double semi_b, double angle = 0.0,
                             const Eigen::Vector2d& center = Eigen::Vector2d::Zero(), const AngleGrid& grid = AngleGrid()) {
  require(semi_a > 0.0 && semi_b > 0.0, "ellipse semi-axes must be positive");
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) {
    double c = std::cos(grid.theta(j) - angle), s = std::sin(grid.theta(j) - angle);
    h[j] = std::sqrt(semi_a * semi_a * c * c + semi_b * semi_b * s * s) + center.dot(grid.unit(j));
  }
  return SupportCurve2(grid, std::move(h));
}

// ---------------------------------------------------------------------------
// Polygon2
// ---------------------------------------------------------------------------

namespace detail {
inline double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }
}  // namespace detail

/// Strictly convex polygon with counter-clockwise vertices.
class Polygon2 {
 public:
  explicit Polygon2(std::vector<Eigen::Vector2d> vertices) : v_(std::move(vertices)) {
    require(v_.size() >= 3, "polygon needs at least 3 vertices");
    const std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i) {
      require(v_[i].allFinite(), "polygon vertices must be finite");
      const auto& a = v_[i];
      const auto& b = v_[(i + 1) % n];
      const auto& c = v_[(i + 2) % n];
      if (!(detail::cross(b - a, c - b) > 0.0))
        throw Error(ErrorKind::not_convex, "polygon is not strictly convex and counter-clockwise at vertex " +
                                               std::to_string((i + 1) % n));
    }
  }

  /// Accepts any vertex loop of a convex polygon: orientation is fixed, and
  /// repeated or collinear vertices are dropped.
  static Polygon2 from_loop(std::vector<Eigen::Vector2d> pts) {
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double tol = 1e-13 * std::max(scale, 1e-300);
    std::vector<Eigen::Vector2d> out;
    for (const auto& p : pts)
      if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
    while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
    double area2 = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) area2 += detail::cross(out[i], out[(i + 1) % out.size()]);
    if (area2 < 0.0) std::reverse(out.begin(), out.end());
    bool changed = true;
    while (changed && out.size() >= 3) {
      changed = false;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& a = out[(i + out.size() - 1) % out.size()];
        const auto& b = out[i];
        const auto& c = out[(i + 1) % out.size()];
        if (detail::cross(b - a, c - b) <= tol * ((b - a).norm() + (c - b).norm())) {
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
      }
    }
    if (out.size() < 3) throw Error(ErrorKind::degenerate_cut, "polygon collapsed to fewer than 3 vertices");
    return Polygon2(std::move(out));
  }

  [[nodiscard]] std::size_t size() const noexcept { return v_.size(); }
  [[nodiscard]] const std::vector<Eigen::Vector2d>& vertices() const noexcept { return v_; }
  [[nodiscard]] const Eigen::Vector2d& vertex(std::size_t i) const { return v_[i % v_.size()]; }
  /// Edge i runs from vertex i to vertex i+1.
  [[nodiscard]] Eigen::Vector2d edge_vector(std::size_t i) const { return vertex(i + 1) - vertex(i); }
  [[nodiscard]] Eigen::Vector2d outward_normal(std::size_t i) const {
    Eigen::Vector2d e = edge_vector(i);
    return Eigen::Vector2d(e.y(), -e.x()).normalized();
  }
  [[nodiscard]] double support(const Eigen::Vector2d& dir) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : v_) best = std::max(best, p.dot(dir));
    return best;
  }

 private:
  std::vector<Eigen::Vector2d> v_;
};

inline Polygon2 box2(double half_x, double half_y) {
  require(half_x > 0.0 && half_y > 0.0, "box halfwidths must be positive");
  return Polygon2({{half_x, -half_y}, {half_x, half_y}, {-half_x, half_y}, {-half_x, -half_y}});
}

/// Andrew's monotone chain; collinear points are dropped.
inline Polygon2 convex_hull(std::vector<Eigen::Vector2d> pts) {
  require(pts.size() >= 3, "convex hull needs at least 3 points");
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && detail::cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && detail::cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return Polygon2::from_loop(std::move(hull));
}

/// Ω ∩ {x : ⟨x, direction⟩ ≤ offset}.
inline Polygon2 halfspace_cut(const Polygon2& body, const Eigen::Vector2d& direction, double offset) {
  require(std::abs(direction.norm() - 1.0) < 1e-9, "cut direction must be a unit vector");
  const auto& v = body.vertices();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : v) lo = std::min(lo, p.dot(direction)), hi = std::max(hi, p.dot(direction));
  if (hi <= offset) return body;
  if (lo >= offset) throw Error(ErrorKind::empty_cut, "halfspace does not meet the interior of the body");
  std::vector<Eigen::Vector2d> out;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    double da = a.dot(direction) - offset, db = b.dot(direction) - offset;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) out.push_back(a + (b - a) * (da / (da - db)));
  }
  double area2 = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) area2 += detail::cross(out[i], out[(i + 1) % out.size()]);
  double scale = (hi - lo) * (hi - lo);
  if (out.size() < 3 || area2 <= 1e-14 * scale) throw Error(ErrorKind::degenerate_cut, "cut body has zero area");
  return Polygon2::from_loop(std::move(out));
}

inline Polygon2 curve_to_polygon(const SupportCurve2& curve) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(curve.size()));
  for (int j = 0; j < curve.size(); ++j) pts.push_back(curve.point(j));
  return Polygon2::from_loop(std::move(pts));
}

/// Support function of a polygon sampled on a grid.
inline std::vector<double> support_samples(const Polygon2& poly, const AngleGrid& grid) {
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) h[j] = poly.support(grid.unit(j));
  return h;
}

// ---------------------------------------------------------------------------
// PolytopeN
// ---------------------------------------------------------------------------

struct Facet {
  std::vector<int> vertices;
  Eigen::VectorXd normal;
  double offset = 0.0;
};

/// (n-1)-simplex on the boundary, produced by coning facet centroids.
struct BoundarySimplex {
  int facet;
  std::vector<Eigen::VectorXd> points;
  double measure;
};

namespace detail {

inline int affine_dim(const std::vector<Eigen::VectorXd>& pts, double scale) {
  if (pts.size() <= 1) return 0;
  Eigen::MatrixXd m(pts.front().size(), static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 1; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-9 * std::max(scale, 1e-300) / std::max(1.0, m.cwiseAbs().maxCoeff()));
  return static_cast<int>(qr.rank());
}

inline double simplex_measure(const std::vector<Eigen::VectorXd>& pts) {
  const auto k = static_cast<Eigen::Index>(pts.size() - 1);
  Eigen::MatrixXd g(pts.front().size(), k);
  for (Eigen::Index i = 0; i < k; ++i) g.col(i) = pts[static_cast<std::size_t>(i + 1)] - pts[0];
  double det = (g.transpose() * g).determinant();
  return std::sqrt(std::max(0.0, det)) / std::tgamma(static_cast<double>(k) + 1.0);
}

}  // namespace detail

/// Convex polytope in R^n (n >= 3) described by vertices and facets.
class PolytopeN {
 public:
  PolytopeN(std::vector<Eigen::VectorXd> vertices, std::vector<Facet> facets)
      : v_(std::move(vertices)), facets_(std::move(facets)) {
    require(!v_.empty(), "polytope needs vertices");
    dim_ = static_cast<int>(v_.front().size());
    require(dim_ >= 2, "polytope dimension must be at least 2");
    require(facets_.size() >= static_cast<std::size_t>(dim_ + 1), "polytope needs at least n + 1 facets");
    scale_ = 0.0;
    for (const auto& p : v_) {
      require(p.size() == dim_ && p.allFinite(), "polytope vertices must share one dimension");
      scale_ = std::max(scale_, p.cwiseAbs().maxCoeff());
    }
    const double tol = 1e-10 * std::max(1.0, scale_);
    for (auto& f : facets_) {
      require(f.normal.size() == dim_, "facet normal dimension mismatch");
      require(std::abs(f.normal.norm() - 1.0) < 1e-9, "facet normal must be a unit vector");
      require(static_cast<int>(f.vertices.size()) >= dim_, "facet needs at least n vertices");
      for (int id : f.vertices) {
        require(id >= 0 && id < static_cast<int>(v_.size()), "facet vertex index out of range");
        require(std::abs(f.normal.dot(v_[id]) - f.offset) <= tol, "facet vertex does not lie on the facet plane");
      }
      for (const auto& w : v_) require(f.normal.dot(w) <= f.offset + tol, "vertex lies outside a facet halfspace");
      std::sort(f.vertices.begin(), f.vertices.end());
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim_);
    for (const auto& p : v_) centroid += p;
    centroid /= static_cast<double>(v_.size());
    for (const auto& f : facets_)
      require(f.normal.dot(centroid) < f.offset - tol, "polytope has empty interior");
    build_simplices();
  }

  /// Brute-force hull of at most 64 points.
  static PolytopeN from_points(const std::vector<Eigen::VectorXd>& pts) {
    require(pts.size() <= 64, "convex hull by facet enumeration is limited to 64 points");
    require(!pts.empty(), "convex hull needs points");
    const int n = static_cast<int>(pts.front().size());
    require(static_cast<int>(pts.size()) >= n + 1, "convex hull needs at least n + 1 points");
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * std::max(1.0, scale);
    std::vector<Facet> found;
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::vector<bool> mask(pts.size(), false);
    std::fill(mask.begin(), mask.begin() + n, true);
    do {
      std::size_t c = 0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (mask[i]) idx[c++] = static_cast<int>(i);
      Eigen::MatrixXd m(n - 1, n);
      for (int r = 1; r < n; ++r) m.row(r - 1) = (pts[idx[r]] - pts[idx[0]]).transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      lu.setThreshold(1e-10);
      if (lu.dimensionOfKernel() != 1) continue;
      Eigen::VectorXd normal = lu.kernel().col(0).normalized();
      double d = normal.dot(pts[idx[0]]);
      bool above = false, below = false;
      for (const auto& p : pts) {
        double s = normal.dot(p) - d;
        above |= s > tol;
        below |= s < -tol;
      }
      if (above && below) continue;
      if (above) normal = -normal, d = -d;
      bool dup = false;
      for (const auto& f : found) dup |= (f.normal - normal).norm() < 1e-9 && std::abs(f.offset - d) < tol;
      if (dup) continue;
      Facet f{{}, normal, d};
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (std::abs(normal.dot(pts[i]) - d) <= tol) f.vertices.push_back(static_cast<int>(i));
      found.push_back(std::move(f));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    // keep only points that lie on some facet, and reindex
    std::vector<int> remap(pts.size(), -1);
    std::vector<Eigen::VectorXd> verts;
    for (auto& f : found)
      for (int& id : f.vertices) {
        if (remap[id] < 0) remap[id] = static_cast<int>(verts.size()), verts.push_back(pts[id]);
        id = remap[id];
      }
    return PolytopeN(std::move(verts), std::move(found));
  }

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<Eigen::VectorXd>& vertices() const noexcept { return v_; }
  [[nodiscard]] const std::vector<Facet>& facets() const noexcept { return facets_; }
  [[nodiscard]] const std::vector<BoundarySimplex>& boundary_simplices() const noexcept { return simplices_; }
  [[nodiscard]] double facet_area(std::size_t f) const { return facet_area_[f]; }

 private:
  void build_simplices() {
    facet_area_.assign(facets_.size(), 0.0);
    for (std::size_t f = 0; f < facets_.size(); ++f) {
      for (auto& pts : triangulate(facets_[f].vertices, dim_ - 1)) {
        double m = detail::simplex_measure(pts);
        facet_area_[f] += m;
        simplices_.push_back({static_cast<int>(f), std::move(pts), m});
      }
    }
  }

  std::vector<Eigen::VectorXd> coords(const std::vector<int>& ids) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(v_[id]);
    return out;
  }

  // Triangulates the k-dimensional face spanned by `face` by coning its
  // centroid over the triangulations of its (k-1)-faces.
  std::vector<std::vector<Eigen::VectorXd>> triangulate(const std::vector<int>& face, int k) const {
    std::vector<std::vector<Eigen::VectorXd>> out;
    if (k == 1) {
      std::size_t bi = 0, bj = 1;
      double best = -1.0;
      for (std::size_t i = 0; i < face.size(); ++i)
        for (std::size_t j = i + 1; j < face.size(); ++j) {
          double d = (v_[face[i]] - v_[face[j]]).norm();
          if (d > best) best = d, bi = i, bj = j;
        }
      out.push_back({v_[face[bi]], v_[face[bj]]});
      return out;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim_);
    for (int id : face) centroid += v_[id];
    centroid /= static_cast<double>(face.size());
    std::set<std::vector<int>> subfaces;
    for (const auto& g : facets_) {
      std::vector<int> s;
      std::set_intersection(face.begin(), face.end(), g.vertices.begin(), g.vertices.end(), std::back_inserter(s));
      if (static_cast<int>(s.size()) < k) continue;
      if (detail::affine_dim(coords(s), scale_) == k - 1) subfaces.insert(std::move(s));
    }
    for (const auto& s : subfaces)
      for (auto& simplex : triangulate(s, k - 1)) {
        simplex.push_back(centroid);
        out.push_back(std::move(simplex));
      }
    return out;
  }

  std::vector<Eigen::VectorXd> v_;
  std::vector<Facet> facets_;
  int dim_ = 0;
  double scale_ = 1.0;
  std::vector<BoundarySimplex> simplices_;
  std::vector<double> facet_area_;
};

inline PolytopeN box_polytope(const std::vector<double>& halfwidths) {
  const int n = static_cast<int>(halfwidths.size());
  require(n >= 3, "box polytope needs n >= 3 (use box2 in the plane)");
  for (double h : halfwidths) require(h > 0.0, "box halfwidths must be positive");
  std::vector<Eigen::VectorXd> verts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? halfwidths[i] : -halfwidths[i];
    verts.push_back(v);
  }
  std::vector<Facet> facets;
  for (int i = 0; i < n; ++i)
    for (int sgn : {1, -1}) {
      Facet f;
      f.normal = Eigen::VectorXd::Zero(n);
      f.normal[i] = sgn;
      f.offset = halfwidths[i];
      for (int mask = 0; mask < (1 << n); ++mask)
        if (((mask >> i & 1) == 1) == (sgn > 0)) f.vertices.push_back(mask);
      facets.push_back(std::move(f));
    }
  return PolytopeN(std::move(verts), std::move(facets));
}

/// {x : Σ|x_i| ≤ radius}.
inline PolytopeN cross_polytope(int n, double radius = 1.0) {
  require(n >= 3 && radius > 0.0, "cross polytope needs n >= 3 and radius > 0");
  std::vector<Eigen::VectorXd> verts;
  for (int i = 0; i < n; ++i)
    for (int sgn : {1, -1}) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      v[i] = sgn * radius;
      verts.push_back(v);
    }
  std::vector<Facet> facets;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Facet f;
    f.normal.resize(n);
    for (int i = 0; i < n; ++i) {
      int sgn = (mask >> i & 1) ? -1 : 1;
      f.normal[i] = sgn / std::sqrt(static_cast<double>(n));
      f.vertices.push_back(2 * i + (sgn > 0 ? 0 : 1));
    }
    f.offset = radius / std::sqrt(static_cast<double>(n));
    facets.push_back(std::move(f));
  }
  return PolytopeN(std::move(verts), std::move(facets));
}

using ConvexBody = std::variant<SupportCurve2, Polygon2, PolytopeN>;

/// Axis-aligned box centred at the origin: a polygon in the plane, a polytope otherwise.
inline ConvexBody box(const std::vector<double>& halfwidths) {
  require(halfwidths.size() >= 2, "box needs at least two halfwidths");
  if (halfwidths.size() == 2) return box2(halfwidths[0], halfwidths[1]);
  return box_polytope(halfwidths);
}

inline int dimension(const ConvexBody& body) {
  return std::visit(
      [](const auto& b) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, PolytopeN>) return b.dim();
        else return 2;
      },
      body);
}

}  // namespace wulff_lab
