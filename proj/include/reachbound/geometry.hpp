#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace reachbound {

/// Extended reals are plain doubles; +infinity stands for an unbounded value.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Slack allowed at the boundary of the spherical-cap domain before rejecting.
inline constexpr double kDomainSlack = 1e-12;

/// Raised when a caller violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when g / g_inv are evaluated outside their domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline bool is_finite(double v) { return std::isfinite(v); }

/// Radius of the sphere whose cap over a chord of length `alpha` has height `x`.
///
/// Defined for 0 <= x <= alpha/2: alpha^2/(8x) + x/2, and +inf at x = 0.
/// Inputs within kDomainSlack above alpha/2 are clamped, since midpoint
/// distances computed in floating point can overshoot by rounding.
inline double g(double alpha, double x) {
  if (!(alpha >= 0.0)) throw DomainError("g: alpha must be >= 0");
  const double half = alpha / 2.0;
  if (!(x >= 0.0) || x > half + kDomainSlack) {
    throw DomainError("g: x=" + std::to_string(x) + " outside [0, alpha/2] for alpha=" +
                      std::to_string(alpha));
  }
  if (x > half) x = half;
  if (x == 0.0) return kInfinity;
  return alpha * alpha / (8.0 * x) + x / 2.0;
}

/// Inverse of g(alpha, .) on r >= alpha/2; returns a value in [0, alpha/2].
inline double g_inv(double alpha, double r) {
  if (!(alpha >= 0.0)) throw DomainError("g_inv: alpha must be >= 0");
  const double half = alpha / 2.0;
  if (!(r >= half - kDomainSlack)) {
    throw DomainError("g_inv: r=" + std::to_string(r) + " below alpha/2 for alpha=" +
                      std::to_string(alpha));
  }
  if (r < half) r = half;
  if (std::isinf(r)) return 0.0;
  const double disc = r * r - alpha * alpha / 4.0;
  // r - sqrt(r^2 - a^2/4) cancels badly for r >> alpha; use the conjugate form.
  const double root = std::sqrt(disc > 0.0 ? disc : 0.0);
  const double denom = r + root;
  if (denom == 0.0) return 0.0;
  return (alpha * alpha / 4.0) / denom;
}

}  // namespace reachbound
