#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lizard {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline Vec2 dir(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Root sign of a closed-form quadratic solution, or the side of an elbow.
enum class Sign : int { Minus = -1, Plus = 1 };

inline constexpr double as_double(Sign s) { return static_cast<int>(s); }
inline constexpr Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

enum class ErrorKind {
  NoAssembly,
  DegenerateDenominator,
  OutOfWorkspace,
  SimplexViolation,
  RangeViolation,
  AssemblyViolation,
  NoUpperRegion,
  SingularHere,
  CouplingInfeasible,
  BadParams,
  Config,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoAssembly: return "NoAssembly";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::OutOfWorkspace: return "OutOfWorkspace";
    case ErrorKind::SimplexViolation: return "SimplexViolation";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::AssemblyViolation: return "AssemblyViolation";
    case ErrorKind::NoUpperRegion: return "NoUpperRegion";
    case ErrorKind::SingularHere: return "SingularHere";
    case ErrorKind::CouplingInfeasible: return "CouplingInfeasible";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix, for re-wrapping with more context.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

namespace detail {

// Roots of a t^2 + b t + c = 0 in the half-angle substitution. Small negative
// discriminants from rounding at a fold are clamped to zero.
inline double clamp_discriminant(double disc, double scale, const char* what) {
  if (disc >= 0.0) return disc;
  if (disc > -1e-12 * scale) return 0.0;
  throw Error(ErrorKind::NoAssembly, std::string(what) + ": negative discriminant");
}

}  // namespace detail

}  // namespace lizard
