#pragma once

#include <stdexcept>
#include <string>

namespace wulff_lab {

enum class ErrorKind {
  invalid_argument,
  zero_vector,
  not_convex,
  not_smooth,
  empty_cut,
  degenerate_cut,
  quadrature_not_converged,
  origin_outside,
  convexity_lost,
  curvature_sign_lost,
  rejection_exhausted,
  line_search_failed,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::zero_vector: return "ZeroVector";
    case ErrorKind::not_convex: return "NotConvex";
    case ErrorKind::not_smooth: return "NotSmooth";
    case ErrorKind::empty_cut: return "EmptyCut";
    case ErrorKind::degenerate_cut: return "DegenerateCut";
    case ErrorKind::quadrature_not_converged: return "QuadratureNotConverged";
    case ErrorKind::origin_outside: return "OriginOutside";
    case ErrorKind::convexity_lost: return "ConvexityLost";
    case ErrorKind::curvature_sign_lost: return "CurvatureSignLost";
    case ErrorKind::rejection_exhausted: return "RejectionExhausted";
    case ErrorKind::line_search_failed: return "LineSearchFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::invalid_argument, message);
}

}  // namespace wulff_lab
