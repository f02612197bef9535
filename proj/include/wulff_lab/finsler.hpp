#pragma once

// Finsler norms F, their polars F°, and the duality calculus between them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/error.hpp"

namespace wulff_lab {

enum class NormKind { euclidean, elliptic, lp };

inline const char* to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::elliptic: return "elliptic";
    case NormKind::lp: return "lp";
  }
  return "unknown";
}

/// Dimension-free description of a norm, as read from a configuration record.
/// For the elliptic kind either `matrix` (row-major n x n) or `axes` is set;
/// axes (a_1, ..., a_n) mean F(x) = sqrt(sum x_i^2 / a_i^2).
struct NormSpec {
  NormKind kind = NormKind::euclidean;
  std::vector<std::vector<double>> matrix;
  std::vector<double> axes;
  double q = 2.0;

  static NormSpec euclidean() { return {}; }
  static NormSpec elliptic_axes(std::vector<double> axes) {
    NormSpec s;
    s.kind = NormKind::elliptic;
    s.axes = std::move(axes);
    return s;
  }
  static NormSpec lp(double q) {
    NormSpec s;
    s.kind = NormKind::lp;
    s.q = q;
    return s;
  }
};

namespace detail {

constexpr double kZeroVectorThreshold = 1e-14;

template <class Vec>
double lp_norm(const Vec& v, double q) {
  double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, q);
  return m * std::pow(s, 1.0 / q);
}

template <class Vec>
Vec lp_grad(const Vec& v, double q) {
  double n = lp_norm(v, q);
  Vec g = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double t = std::abs(v[i]) / n;
    g[i] = std::copysign(std::pow(t, q - 1.0), v[i]);
    if (v[i] == 0.0) g[i] = 0.0;
  }
  return g;
}

// Largest value of f + f'' for f(θ) = ||(cos θ, sin θ)||_q, i.e. the largest
// radius of curvature of the planar Wulff shape of the q-norm.
inline double lp_max_wulff_radius(double q) {
  constexpr int n = 8192;
  const double step = 2.0 * std::numbers::pi / n;
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) {
    double c = std::abs(std::cos(j * step)), s = std::abs(std::sin(j * step));
    double m = std::max(c, s);
    f[j] = m * std::pow(std::pow(c / m, q) + std::pow(s / m, q), 1.0 / q);
  }
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    auto at = [&](int k) { return f[(k % n + n) % n]; };
    double d2 = (-at(j - 2) + 16 * at(j - 1) - 30 * at(j) + 16 * at(j + 1) - at(j + 2)) / (12 * step * step);
    worst = std::max(worst, f[j] + d2);
  }
  return worst;
}

}  // namespace detail

/// A smooth Finsler norm on R^n together with its polar.
///
/// Dim is either a fixed dimension (2 for the planar machinery) or
/// Eigen::Dynamic, in which case the dimension is set at construction.
/// Values are immutable after construction.
template <int Dim>
class BasicFinslerNorm {
 public:
  using Vec = Eigen::Matrix<double, Dim, 1>;
  using Mat = Eigen::Matrix<double, Dim, Dim>;

  static BasicFinslerNorm euclidean(int dim = Dim) {
    BasicFinslerNorm n(NormKind::euclidean, check_dim(dim));
    n.lower_ = n.upper_ = 1.0;
    n.wulff_curvature_ = 1.0;
    return n;
  }

  /// F(ξ) = sqrt(ξᵀAξ) for a symmetric positive-definite A.
  static BasicFinslerNorm elliptic(const Mat& a) {
    require(a.rows() == a.cols(), "elliptic matrix must be square");
    BasicFinslerNorm n(NormKind::elliptic, check_dim(static_cast<int>(a.rows())));
    require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()),
            "elliptic matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> eig(a);
    require(eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0,
            "elliptic matrix must be positive definite");
    n.a_ = a;
    n.a_inv_ = a.inverse();
    double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    n.lower_ = std::sqrt(lo);
    n.upper_ = std::sqrt(hi);
    // Wulff shape {ξᵀA⁻¹ξ < 1} has semi-axes sqrt(λ_i(A)).
    n.wulff_curvature_ = std::sqrt(lo) / hi;
    n.sqrt_det_ = std::sqrt(a.determinant());
    return n;
  }

  /// F(x) = sqrt(sum x_i^2 / a_i^2); Wulff semi-axes are 1/a_i.
  static BasicFinslerNorm elliptic_axes(const std::vector<double>& axes) {
    require(axes.size() >= 2, "elliptic axes need at least two entries");
    if constexpr (Dim != Eigen::Dynamic) require(axes.size() == static_cast<std::size_t>(Dim), "elliptic axes size mismatch");
    Mat a = Mat::Zero(static_cast<Eigen::Index>(axes.size()), static_cast<Eigen::Index>(axes.size()));
    for (std::size_t i = 0; i < axes.size(); ++i) {
      require(axes[i] > 0.0 && std::isfinite(axes[i]), "elliptic axes must be positive");
      a(i, i) = 1.0 / (axes[i] * axes[i]);
    }
    return elliptic(a);
  }

  static BasicFinslerNorm lp(double q, int dim = Dim) {
    require(std::isfinite(q) && q > 1.0, "lp exponent q must satisfy 1 < q < infinity");
    BasicFinslerNorm n(NormKind::lp, check_dim(dim));
    n.q_ = q;
    n.q_dual_ = q / (q - 1.0);
    double scale = std::pow(static_cast<double>(n.dim_), 1.0 / q - 0.5);
    n.lower_ = std::min(1.0, scale);
    n.upper_ = std::max(1.0, scale);
    // q < 2: the Wulff shape (unit ball of the dual exponent > 2) flattens at the axes.
    n.wulff_curvature_ = q < 2.0 ? 0.0 : 1.0 / detail::lp_max_wulff_radius(q);
    return n;
  }

  static BasicFinslerNorm from_spec(const NormSpec& spec, int dim = Dim) {
    switch (spec.kind) {
      case NormKind::euclidean: return euclidean(dim);
      case NormKind::lp: return lp(spec.q, dim);
      case NormKind::elliptic: {
        if (!spec.matrix.empty()) {
          int n = static_cast<int>(spec.matrix.size());
          if constexpr (Dim != Eigen::Dynamic) dim = Dim;
          require(dim == Eigen::Dynamic || n == dim, "elliptic matrix dimension mismatch");
          Mat a(n, n);
          for (int i = 0; i < n; ++i) {
            require(static_cast<int>(spec.matrix[i].size()) == n, "elliptic matrix must be square");
            for (int j = 0; j < n; ++j) a(i, j) = spec.matrix[i][j];
          }
          return elliptic(a);
        }
        std::vector<double> axes = spec.axes;
        require(axes.size() >= 2, "elliptic norm needs a matrix or at least two axes");
        // Lifting a planar spec to higher dimension pads the extra axes with 1.
        if (dim != Eigen::Dynamic) {
          require(static_cast<int>(axes.size()) <= dim, "elliptic axes exceed the dimension");
          axes.resize(static_cast<std::size_t>(dim), 1.0);
        }
        return elliptic_axes(axes);
      }
    }
    throw Error(ErrorKind::invalid_argument, "unknown norm kind");
  }

  [[nodiscard]] NormKind kind() const noexcept { return kind_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double lower_bound() const noexcept { return lower_; }
  [[nodiscard]] double upper_bound() const noexcept { return upper_; }
  /// Lower bound c on the principal curvatures of the unit Wulff shape.
  [[nodiscard]] double wulff_curvature_bound() const noexcept { return wulff_curvature_; }
  [[nodiscard]] double exponent() const noexcept { return q_; }
  [[nodiscard]] double dual_exponent() const noexcept { return q_dual_; }
  [[nodiscard]] const Mat& matrix() const noexcept { return a_; }

  double operator()(const Vec& xi) const { return eval(xi); }

  [[nodiscard]] double eval(const Vec& xi) const {
    switch (kind_) {
      case NormKind::euclidean: return xi.norm();
      case NormKind::elliptic: return std::sqrt(std::max(0.0, xi.dot(a_ * xi)));
      case NormKind::lp: return detail::lp_norm(xi, q_);
    }
    return 0.0;
  }

  [[nodiscard]] double polar(const Vec& xi) const {
    switch (kind_) {
      case NormKind::euclidean: return xi.norm();
      case NormKind::elliptic: return std::sqrt(std::max(0.0, xi.dot(a_inv_ * xi)));
      case NormKind::lp: return detail::lp_norm(xi, q_dual_);
    }
    return 0.0;
  }

  /// ∇F(ξ); zero-homogeneous, undefined at the origin.
  [[nodiscard]] Vec grad(const Vec& xi) const {
    check_nonzero(xi);
    switch (kind_) {
      case NormKind::euclidean: return xi / xi.norm();
      case NormKind::elliptic: return (a_ * xi) / eval(xi);
      case NormKind::lp: return detail::lp_grad(xi, q_);
    }
    return xi;
  }

  [[nodiscard]] Vec polar_grad(const Vec& xi) const {
    check_nonzero(xi);
    switch (kind_) {
      case NormKind::euclidean: return xi / xi.norm();
      case NormKind::elliptic: return (a_inv_ * xi) / polar(xi);
      case NormKind::lp: return detail::lp_grad(xi, q_dual_);
    }
    return xi;
  }

  /// κ_n: the volume of the unit Wulff shape {F° < 1}.
  [[nodiscard]] double unit_wulff_volume() const {
    const double n = dim_;
    const double ball = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    switch (kind_) {
      case NormKind::euclidean: return ball;
      case NormKind::elliptic: return ball * sqrt_det_;
      case NormKind::lp: {
        const double s = q_dual_;
        return std::pow(2.0 * std::tgamma(1.0 + 1.0 / s), n) / std::tgamma(1.0 + n / s);
      }
    }
    return ball;
  }

  [[nodiscard]] NormSpec spec() const {
    NormSpec s;
    s.kind = kind_;
    s.q = q_;
    if (kind_ == NormKind::elliptic) {
      s.matrix.assign(static_cast<std::size_t>(dim_), std::vector<double>(static_cast<std::size_t>(dim_)));
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) s.matrix[i][j] = a_(i, j);
    }
    return s;
  }

 private:
  BasicFinslerNorm(NormKind kind, int dim) : kind_(kind), dim_(dim) {
    a_ = Mat::Identity(dim, dim);
    a_inv_ = Mat::Identity(dim, dim);
  }

  static int check_dim(int dim) {
    if constexpr (Dim != Eigen::Dynamic) dim = Dim;
    require(dim >= 2, "norm dimension must be at least 2");
    return dim;
  }

  static void check_nonzero(const Vec& xi) {
    if (!(xi.norm() >= detail::kZeroVectorThreshold))
      throw Error(ErrorKind::zero_vector, "gradient requested at |xi| < 1e-14");
  }

  NormKind kind_;
  int dim_;
  Mat a_;
  Mat a_inv_;
  double sqrt_det_ = 1.0;
  double q_ = 2.0;
  double q_dual_ = 2.0;
  double lower_ = 1.0;
  double upper_ = 1.0;
  double wulff_curvature_ = 1.0;
};

using FinslerNorm2 = BasicFinslerNorm<2>;
using FinslerNormX = BasicFinslerNorm<Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Generic sup-based polar, used only as an oracle.
// ---------------------------------------------------------------------------

struct SupOptions {
  int coarse_directions = 4096;
  double angle_tolerance = 1e-13;
};

/// sup_{ξ≠0} ⟨ξ, v⟩ / fn(ξ) for a positively 1-homogeneous fn > 0.
/// Coarse maximisation over a direction set, then local refinement:
/// golden-section in the plane, compass search on the sphere otherwise.
template <class Fn>
double sup_ratio(Fn&& fn, const Eigen::VectorXd& v, const SupOptions& opt = {}) {
  const auto n = v.size();
  require(n >= 2, "sup_ratio needs dimension >= 2");
  if (v.norm() == 0.0) return 0.0;
  auto ratio = [&](const Eigen::VectorXd& xi) { return xi.dot(v) / fn(xi); };

  if (n == 2) {
    auto at = [&](double t) {
      Eigen::VectorXd xi(2);
      xi << std::cos(t), std::sin(t);
      return ratio(xi);
    };
    const int m = opt.coarse_directions;
    const double step = 2.0 * std::numbers::pi / m;
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      double val = at(k * step);
      if (val > best_val) best_val = val, best = k;
    }
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = (best - 1) * step, hi = (best + 1) * step;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    while (hi - lo > opt.angle_tolerance) {
      if (f1 < f2) {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + gr * (hi - lo), f2 = at(x2);
      } else {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - gr * (hi - lo), f1 = at(x1);
      }
    }
    return std::max(best_val, std::max(f1, f2));
  }

  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(opt.coarse_directions));
  if (n == 3) {
    const int m = opt.coarse_directions;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / m;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Eigen::VectorXd d(3);
      d << r * std::cos(golden * k), r * std::sin(golden * k), z;
      dirs.push_back(d);
    }
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> normal;
    for (int k = 0; k < opt.coarse_directions; ++k) {
      Eigen::VectorXd d(n);
      for (Eigen::Index i = 0; i < n; ++i) d[i] = normal(rng);
      dirs.push_back(d.normalized());
    }
  }
  Eigen::VectorXd best = dirs.front();
  double best_val = ratio(best);
  for (const auto& d : dirs) {
    double val = ratio(d);
    if (val > best_val) best_val = val, best = d;
  }
  double step = 0.1;
  while (step > opt.angle_tolerance) {
    bool improved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd trial = best;
        trial[i] += sgn * step;
        trial.normalize();
        double val = ratio(trial);
        if (val > best_val) best_val = val, best = trial, improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_val;
}

template <int Dim>
double generic_polar(const BasicFinslerNorm<Dim>& norm, const Eigen::VectorXd& v, const SupOptions& opt = {}) {
  return sup_ratio([&](const Eigen::VectorXd& xi) { return norm.eval(xi); }, v, opt);
}

/// (F°)° evaluated by the sup formula; should reproduce F.
template <int Dim>
double generic_bipolar(const BasicFinslerNorm<Dim>& norm, const Eigen::VectorXd& v, const SupOptions& opt = {}) {
  return sup_ratio([&](const Eigen::VectorXd& xi) { return norm.polar(xi); }, v, opt);
}

// ---------------------------------------------------------------------------
// Duality identities as checkable predicates.
// ---------------------------------------------------------------------------

struct DualityResiduals {
  double norm_of_polar_grad;   // |F(∇F°(ξ)) − 1|
  double polar_of_norm_grad;   // |F°(∇F(ξ)) − 1|
  double polar_inversion;      // |F°(ξ)∇F(∇F°(ξ)) − ξ|
  double norm_inversion;       // |F(ξ)∇F°(∇F(ξ)) − ξ|

  [[nodiscard]] double max() const {
    return std::max({norm_of_polar_grad, polar_of_norm_grad, polar_inversion, norm_inversion});
  }
};

template <int Dim>
DualityResiduals check_duality(const BasicFinslerNorm<Dim>& norm, const typename BasicFinslerNorm<Dim>::Vec& xi) {
  auto gp = norm.polar_grad(xi);
  auto g = norm.grad(xi);
  DualityResiduals r{};
  r.norm_of_polar_grad = std::abs(norm.eval(gp) - 1.0);
  r.polar_of_norm_grad = std::abs(norm.polar(g) - 1.0);
  r.polar_inversion = (norm.polar(xi) * norm.grad(gp) - xi).norm();
  r.norm_inversion = (norm.eval(xi) * norm.polar_grad(g) - xi).norm();
  return r;
}

}  // namespace wulff_lab
