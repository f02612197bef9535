#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/error.hpp"

namespace wulff_lab {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  int max_depth = 50;
};

namespace detail {

template <class Fn>
double simpson_recurse(Fn& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth,
                       double& worst_err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol || (b - a) <= 1e-15 * std::max(1.0, std::abs(a))) {
    return left + right + diff / 15.0;
  }
  if (depth <= 0) {
    worst_err = std::max(worst_err, std::abs(diff) / 15.0);
    return left + right + diff / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst_err) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst_err);
}

}  // namespace detail

/// ∫_a^b f by adaptive Simpson with Richardson correction.
template <class Fn>
double adaptive_simpson(Fn&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  // A 5-point pass sets the scale for the relative tolerance.
  const double q1 = f(0.25 * (3.0 * a + b)), q3 = f(0.25 * (a + 3.0 * b));
  const double coarse = (b - a) / 12.0 * (fa + 4.0 * q1 + 2.0 * fm + 4.0 * q3 + fb);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = opt.rel_tol * std::max(std::abs(coarse), 1e-300);
  double worst = 0.0;
  double result = detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, opt.max_depth, worst);
  if (worst > tol) {
    throw Error(ErrorKind::quadrature_not_converged,
                "adaptive Simpson reached depth " + std::to_string(opt.max_depth) +
                    " with local error " + std::to_string(worst) + " (target " + std::to_string(tol) + ")");
  }
  return result;
}

namespace detail {

// Grundmann-Möller rule of degree 2s+1 on the k-simplex, as barycentric
// points with weights normalised to sum to one.
struct SimplexRule {
  std::vector<std::vector<double>> bary;
  std::vector<double> weights;
};

inline void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

inline SimplexRule grundmann_moeller(int k, int s) {
  SimplexRule rule;
  const int d = 2 * s + 1;
  double total = 0.0;
  for (int i = 0; i <= s; ++i) {
    double w = ((i % 2) ? -1.0 : 1.0) * std::pow(static_cast<double>(d + k - 2 * i), d) /
               (std::tgamma(i + 1.0) * std::tgamma(static_cast<double>(d + k - i) + 1.0));
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    compositions(s - i, k + 1, cur, betas);
    for (const auto& beta : betas) {
      std::vector<double> lam(static_cast<std::size_t>(k + 1));
      for (int j = 0; j <= k; ++j) lam[j] = (2.0 * beta[j] + 1.0) / (d + k - 2 * i);
      rule.bary.push_back(std::move(lam));
      rule.weights.push_back(w);
      total += w;
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

inline double simplex_volume(const std::vector<Eigen::VectorXd>& pts) {
  const auto k = static_cast<Eigen::Index>(pts.size() - 1);
  Eigen::MatrixXd g(pts.front().size(), k);
  for (Eigen::Index i = 0; i < k; ++i) g.col(i) = pts[static_cast<std::size_t>(i + 1)] - pts[0];
  return std::sqrt(std::max(0.0, (g.transpose() * g).determinant())) / std::tgamma(static_cast<double>(k) + 1.0);
}

template <class Fn>
double apply_rule(const SimplexRule& rule, Fn& f, const std::vector<Eigen::VectorXd>& pts, double vol) {
  double acc = 0.0;
  Eigen::VectorXd x(pts.front().size());
  for (std::size_t q = 0; q < rule.bary.size(); ++q) {
    x.setZero();
    for (std::size_t j = 0; j < pts.size(); ++j) x += rule.bary[q][j] * pts[j];
    acc += rule.weights[q] * f(x);
  }
  return acc * vol;
}

struct SimplexPiece {
  std::vector<Eigen::VectorXd> pts;
  double vol;
  double value;
  double error;
  bool operator<(const SimplexPiece& o) const { return error < o.error; }
};

template <class Fn>
SimplexPiece make_piece(const SimplexRule& low, const SimplexRule& high, Fn& f, std::vector<Eigen::VectorXd> pts,
                        double vol) {
  const double q5 = apply_rule(low, f, pts, vol), q7 = apply_rule(high, f, pts, vol);
  return {std::move(pts), vol, q7, std::abs(q7 - q5)};
}

inline std::pair<std::size_t, std::size_t> longest_edge(const std::vector<Eigen::VectorXd>& pts) {
  std::size_t ia = 0, ib = 1;
  double longest = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double len = (pts[i] - pts[j]).squaredNorm();
      if (len > longest) longest = len, ia = i, ib = j;
    }
  return {ia, ib};
}

}  // namespace detail

/// ∫ f over a k-simplex embedded in R^n (k+1 vertices), with respect to
/// k-dimensional Hausdorff measure. Degree-5 and degree-7 Grundmann-Möller
/// rules give the error estimate; longest-edge bisection refines.
template <class Fn>
double simplex_integral(Fn&& f, const std::vector<Eigen::VectorXd>& pts, const QuadratureOptions& opt = {}) {
  require(pts.size() >= 2, "simplex needs at least two vertices");
  const int k = static_cast<int>(pts.size()) - 1;
  static thread_local std::vector<std::array<detail::SimplexRule, 2>> cache;
  if (cache.size() <= static_cast<std::size_t>(k)) cache.resize(static_cast<std::size_t>(k + 1));
  if (cache[k][0].bary.empty()) cache[k] = {detail::grundmann_moeller(k, 2), detail::grundmann_moeller(k, 3)};
  const auto& rules = cache[k];
  const double vol = detail::simplex_volume(pts);
  if (vol == 0.0) return 0.0;
  // global adaptivity: always bisect the piece with the largest error estimate
  std::priority_queue<detail::SimplexPiece> heap;
  heap.push(detail::make_piece(rules[0], rules[1], f, pts, vol));
  double total = heap.top().value, error = heap.top().error;
  const std::size_t budget = std::size_t{1} << std::min(opt.max_depth, 18);
  while (error > opt.rel_tol * std::abs(total) && error > 1e-300) {
    if (heap.size() >= budget)
      throw Error(ErrorKind::quadrature_not_converged, "simplex quadrature stopped with error estimate " +
                                                           std::to_string(error) + " after " +
                                                           std::to_string(heap.size()) + " pieces");
    detail::SimplexPiece worst = heap.top();
    heap.pop();
    const auto [ia, ib] = detail::longest_edge(worst.pts);
    const Eigen::VectorXd mid = 0.5 * (worst.pts[ia] + worst.pts[ib]);
    std::vector<Eigen::VectorXd> left = worst.pts, right = std::move(worst.pts);
    left[ib] = mid;
    right[ia] = mid;
    auto a = detail::make_piece(rules[0], rules[1], f, std::move(left), 0.5 * worst.vol);
    auto b = detail::make_piece(rules[0], rules[1], f, std::move(right), 0.5 * worst.vol);
    total += a.value + b.value - worst.value;
    error += a.error + b.error - worst.error;
    heap.push(std::move(a));
    heap.push(std::move(b));
  }
  // re-sum to shed the drift of the running updates
  total = 0.0;
  for (; !heap.empty(); heap.pop()) total += heap.top().value;
  return total;
}

}  // namespace wulff_lab
