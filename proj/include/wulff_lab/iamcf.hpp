#pragma once

// Inverse anisotropic mean curvature flow of planar convex curves.
//
// In support-function form the point law ∂x/∂t = ν_F/H_F reads
//   ∂h/∂t = F(u) / H_F = c(θ) (h + h''),   c = f / (f + f''),
// which is linear in h; Wulff shapes h = r f grow as r e^t.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wulff_lab/functionals.hpp"

namespace wulff_lab {

struct WulffFit {
  double r = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double distance = 0.0;  // sup-distance of support functions
};

/// Least-squares fit h ≈ r f + ⟨x0, u⟩ over the grid nodes.
inline WulffFit fit_wulff(const AngleGrid& grid, std::span<const double> h, const FinslerNorm2& norm) {
  require(static_cast<int>(h.size()) == grid.size(), "support samples must match the grid");
  Eigen::MatrixXd a(grid.size(), 3);
  Eigen::VectorXd b(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    a(j, 0) = norm(grid.unit(j));
    a(j, 1) = grid.cos(j);
    a(j, 2) = grid.sin(j);
    b[j] = h[j];
  }
  Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
  WulffFit fit;
  fit.r = coef[0];
  fit.center = coef.tail<2>();
  fit.distance = (a * coef - b).cwiseAbs().maxCoeff();
  return fit;
}

inline WulffFit fit_wulff(const SupportCurve2& curve, const FinslerNorm2& norm) {
  return fit_wulff(curve.grid(), curve.support(), norm);
}

struct FlowOptions {
  double dt_max = 1e-3;
  double cfl = 0.8;           // fraction of the RK4 real-axis stability limit
  double guard = 0.5;         // reject a step if min ρ falls below guard × previous min ρ
  int max_halvings = 20;
  bool with_hk = true;
};

struct FlowState {
  double t = 0.0;
  SupportCurve2 curve;
  FunctionalReport report;
  WulffFit rescaled_fit;  // fit of h e^{−t}
};

struct StepDiagnostics {
  double t;
  double dt;
  double min_rho;
  double min_hf;
};

struct FlowTrace {
  std::vector<FlowState> states;
  std::vector<StepDiagnostics> steps;
};

namespace detail {

struct FlowOperator {
  std::vector<double> c;  // f / (f + f'')
  std::vector<double> f_rho;
  double step;
  double stable_dt;

  FlowOperator(const AngleGrid& grid, const FinslerNorm2& norm, double cfl) : step(grid.step()) {
    std::vector<double> f(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) f[j] = norm(grid.unit(j));
    auto& fr = f_rho = periodic_plus_d2(f, step);
    c.resize(f.size());
    double cmax = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (!(fr[j] > 0.0))
        throw Error(ErrorKind::curvature_sign_lost, "f + f'' is not positive at node " + std::to_string(j));
      c[j] = f[j] / fr[j];
      cmax = std::max(cmax, c[j]);
    }
    // spectrum of c(1 + D2) lies in [−cmax (16/3)/Δθ², cmax]; RK4 is stable to −2.78
    stable_dt = cfl * 2.78 / (cmax * (16.0 / 3.0) / (step * step));
  }

  // out = c (h + D2 h), with the wrap-around handled outside the main loop.
  void apply(const std::vector<double>& h, std::vector<double>& out) const {
    const int n = static_cast<int>(h.size());
    const double s = 1.0 / (12.0 * step * step);
    out.resize(h.size());
    auto at = [&](int j) { return h[static_cast<std::size_t>((j + n) % n)]; };
    auto node = [&](int j, double m2, double m1, double p1, double p2) {
      out[j] = c[j] * (h[j] + (-m2 + 16.0 * m1 - 30.0 * h[j] + 16.0 * p1 - p2) * s);
    };
    for (int j : {0, 1, n - 2, n - 1}) node(j, at(j - 2), at(j - 1), at(j + 1), at(j + 2));
    const double* hp = h.data();
    for (int j = 2; j < n - 2; ++j) node(j, hp[j - 2], hp[j - 1], hp[j + 1], hp[j + 2]);
  }

  std::vector<double> rk4(const std::vector<double>& h, double dt) const {
    const std::size_t n = h.size();
    auto& [k1, k2, k3, k4, tmp] = work_;
    tmp.resize(n);
    apply(h, k1);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = h[j] + 0.5 * dt * k1[j];
    apply(tmp, k2);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = h[j] + 0.5 * dt * k2[j];
    apply(tmp, k3);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = h[j] + dt * k3[j];
    apply(tmp, k4);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = h[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
  }

  /// min over nodes of h + h'' and of H_F = (f + f'')/(h + h'').
  [[nodiscard]] std::pair<double, double> margins(const std::vector<double>& h) const {
    const int n = static_cast<int>(h.size());
    const double s = 1.0 / (12.0 * step * step);
    double best = std::numeric_limits<double>::infinity(), best_hf = best;
    for (int j = 0; j < n; ++j) {
      auto at = [&](int k) { return h[static_cast<std::size_t>((k + n) % n)]; };
      const double v = (j >= 2 && j < n - 2)
                           ? h[j] + (-h[j - 2] + 16.0 * h[j - 1] - 30.0 * h[j] + 16.0 * h[j + 1] - h[j + 2]) * s
                           : h[j] + (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * h[j] + 16.0 * at(j + 1) - at(j + 2)) * s;
      best = std::min(best, v);
      best_hf = std::min(best_hf, v > 0.0 ? f_rho[j] / v : -1.0);
    }
    return {best, best_hf};
  }

 private:
  struct Workspace {
    std::vector<double> k1, k2, k3, k4, tmp;
  };
  mutable Workspace work_;
};

inline double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// Advances h by `duration` with uniform substeps no larger than the stable step.
inline std::vector<double> advance(const FlowOperator& op, std::vector<double> h, double t0, double duration,
                                   const FlowOptions& opt, std::vector<StepDiagnostics>* diag) {
  double t = t0;
  double remaining = duration;
  double dt_cap = std::min(opt.dt_max, op.stable_dt);
  double rho_old = op.margins(h).first;
  while (remaining > 0.0) {
    const double steps_left = std::ceil(remaining / dt_cap - 1e-9);
    double dt = remaining / std::max(1.0, steps_left);
    int halvings = 0;
    for (;;) {
      auto next = op.rk4(h, dt);
      const auto [rho_new, hf] = op.margins(next);
      if (rho_new >= opt.guard * rho_old && rho_new > 0.0) {
        h = std::move(next);
        rho_old = rho_new;
        t += dt;
        remaining -= dt;
        if (diag) {
          if (!(hf > 0.0)) throw Error(ErrorKind::curvature_sign_lost, "H_F became nonpositive at t = " + std::to_string(t));
          diag->push_back({t, dt, rho_new, hf});
        }
        break;
      }
      if (++halvings > opt.max_halvings) {
        if (rho_new <= 0.0)
          throw Error(ErrorKind::convexity_lost, "h + h'' became nonpositive at t = " + std::to_string(t));
        throw Error(ErrorKind::convexity_lost, "step rejected after " + std::to_string(opt.max_halvings) +
                                                   " halvings at t = " + std::to_string(t));
      }
      dt *= 0.5;
      dt_cap = dt;
    }
    if (remaining < 1e-15 * std::max(1.0, duration)) remaining = 0.0;
  }
  return h;
}

}  // namespace detail

/// One explicit RK4 step of size dt (no adaptivity).
inline FlowState step(const FlowState& state, const FinslerNorm2& norm, double p, double dt,
                      const FlowOptions& opt = {}) {
  require(dt > 0.0, "time step must be positive");
  detail::FlowOperator op(state.curve.grid(), norm, opt.cfl);
  std::vector<double> h(state.curve.support().begin(), state.curve.support().end());
  auto next = op.rk4(h, dt);
  const double rho_min = detail::min_of(periodic_plus_d2(next, op.step));
  if (!(rho_min > 0.0)) throw Error(ErrorKind::convexity_lost, "h + h'' became nonpositive");
  FlowState out{state.t + dt, SupportCurve2(state.curve.grid(), std::move(next)), {}, {}};
  out.report = functional_value(out.curve, norm, p, opt.with_hk);
  std::vector<double> scaled(out.curve.support().begin(), out.curve.support().end());
  for (double& v : scaled) v *= std::exp(-out.t);
  out.rescaled_fit = fit_wulff(out.curve.grid(), scaled, norm);
  return out;
}

/// The curve after flowing for time `duration`.
inline SupportCurve2 advance(const SupportCurve2& curve, const FinslerNorm2& norm, double duration,
                             const FlowOptions& opt = {}) {
  require(duration >= 0.0, "flow duration must be nonnegative");
  detail::FlowOperator op(curve.grid(), norm, opt.cfl);
  std::vector<double> h(curve.support().begin(), curve.support().end());
  return SupportCurve2(curve.grid(), detail::advance(op, std::move(h), 0.0, duration, opt, nullptr));
}

inline FlowTrace run(const SupportCurve2& initial, const FinslerNorm2& norm, double p, double horizon,
                     std::vector<double> output_times, const FlowOptions& opt = {}) {
  check_exponent(p);
  require(horizon > 0.0, "flow horizon must be positive");
  anisotropic_curvature(initial, norm);
  std::sort(output_times.begin(), output_times.end());
  output_times.erase(std::unique(output_times.begin(), output_times.end()), output_times.end());
  for (double t : output_times) require(t >= 0.0 && t <= horizon, "output times must lie in [0, T]");
  if (output_times.empty() || output_times.back() < horizon) output_times.push_back(horizon);

  detail::FlowOperator op(initial.grid(), norm, opt.cfl);
  FlowTrace trace;
  std::vector<double> h(initial.support().begin(), initial.support().end());
  double t = 0.0;
  for (double target : output_times) {
    h = detail::advance(op, std::move(h), t, target - t, opt, &trace.steps);
    t = target;
    FlowState st{t, SupportCurve2(initial.grid(), h), {}, {}};
    st.report = functional_value(st.curve, norm, p, opt.with_hk);
    std::vector<double> scaled = h;
    for (double& v : scaled) v *= std::exp(-t);
    st.rescaled_fit = fit_wulff(initial.grid(), scaled, norm);
    trace.states.push_back(std::move(st));
  }
  return trace;
}

/// One-sided second-order difference of 𝓕 along the flow:
/// (−3𝓕(0) + 4𝓕(τ) − 𝓕(2τ)) / (2τ).
inline double flow_quotient_derivative_fd(const SupportCurve2& curve, const FinslerNorm2& norm, double p, double tau,
                                          const FlowOptions& opt = {}) {
  auto q = [&](const SupportCurve2& c) {
    return quotient(momentum_f(c, norm, p), perimeter_f(c, norm), volume(c), p, 2);
  };
  const auto c1 = advance(curve, norm, tau, opt);
  const auto c2 = advance(c1, norm, tau, opt);
  return (-3.0 * q(curve) + 4.0 * q(c1) - q(c2)) / (2.0 * tau);
}

}  // namespace wulff_lab
