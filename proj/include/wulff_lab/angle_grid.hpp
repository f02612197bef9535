#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/error.hpp"

namespace wulff_lab {

/// Uniform periodic grid θ_j = 2πj/N on the circle of normal directions.
class AngleGrid {
 public:
  explicit AngleGrid(int size = 1024) : size_(size) {
    require(size >= 64 && (size & (size - 1)) == 0, "angle grid size must be a power of two >= 64");
    step_ = 2.0 * std::numbers::pi / size;
    cos_.resize(static_cast<std::size_t>(size));
    sin_.resize(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) {
      cos_[j] = std::cos(j * step_);
      sin_[j] = std::sin(j * step_);
    }
  }

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] double step() const noexcept { return step_; }
  [[nodiscard]] double theta(int j) const noexcept { return j * step_; }
  [[nodiscard]] double cos(int j) const noexcept { return cos_[j]; }
  [[nodiscard]] double sin(int j) const noexcept { return sin_[j]; }
  [[nodiscard]] Eigen::Vector2d unit(int j) const noexcept { return {cos_[j], sin_[j]}; }
  [[nodiscard]] Eigen::Vector2d unit_perp(int j) const noexcept { return {-sin_[j], cos_[j]}; }

  friend bool operator==(const AngleGrid& a, const AngleGrid& b) noexcept { return a.size_ == b.size_; }

 private:
  int size_;
  double step_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

inline Eigen::Vector2d unit_at(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Eigen::Vector2d unit_perp_at(double theta) { return {-std::sin(theta), std::cos(theta)}; }

// 4th-order periodic central differences. Both stencils are symmetric/antisymmetric
// circulants, so sum(a * D2 b) == sum(b * D2 a) holds exactly up to rounding.

inline std::vector<double> periodic_d1(std::span<const double> v, double step) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(v.size());
  const double s = 1.0 / (12.0 * step);
  for (int j = 0; j < n; ++j) {
    int m2 = (j - 2 + n) % n, m1 = (j - 1 + n) % n, p1 = (j + 1) % n, p2 = (j + 2) % n;
    out[j] = (v[m2] - 8.0 * v[m1] + 8.0 * v[p1] - v[p2]) * s;
  }
  return out;
}

inline std::vector<double> periodic_d2(std::span<const double> v, double step) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(v.size());
  const double s = 1.0 / (12.0 * step * step);
  for (int j = 0; j < n; ++j) {
    int m2 = (j - 2 + n) % n, m1 = (j - 1 + n) % n, p1 = (j + 1) % n, p2 = (j + 2) % n;
    out[j] = (-v[m2] + 16.0 * v[m1] - 30.0 * v[j] + 16.0 * v[p1] - v[p2]) * s;
  }
  return out;
}

/// v + v'' on the grid.
inline std::vector<double> periodic_plus_d2(std::span<const double> v, double step) {
  auto out = periodic_d2(v, step);
  for (std::size_t j = 0; j < v.size(); ++j) out[j] += v[j];
  return out;
}

struct LocalValue {
  double value;
  double derivative;
};

/// 8-point Lagrange interpolation of periodic samples at an arbitrary angle.
inline LocalValue periodic_interpolate(std::span<const double> v, double step, double theta) {
  constexpr int kPoints = 8;
  const int n = static_cast<int>(v.size());
  const double s = theta / step;
  const int base = static_cast<int>(std::floor(s)) - kPoints / 2 + 1;
  const double x = s - base;  // position relative to node offsets 0..7
  double value = 0.0, deriv = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    double li = 1.0, dli = 0.0;
    for (int k = 0; k < kPoints; ++k) {
      if (k == i) continue;
      double term = (x - k) / (i - k);
      dli = dli * term + li / (i - k);
      li *= term;
    }
    double sample = v[((base + i) % n + n) % n];
    value += li * sample;
    deriv += dli * sample;
  }
  return {value, deriv / step};
}

}  // namespace wulff_lab
