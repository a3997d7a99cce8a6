#pragma once

#include "lizard/common.hpp"
#include "lizard/core.hpp"

namespace lizard {

/// Leg four-bar. Input pivot at the origin, output pivot at (lg10, 0).
struct FourBarGeometry {
  double lg1 = 45.0;
  double lg12 = 50.0;
  double lg13 = 45.0;
  double lg10 = 50.0;
  double toe = 0.0;  // foot pad extension beyond the output link

  FourBarGeometry() = default;
  FourBarGeometry(double a, double b, double c, double d, double t = 0.0)
      : lg1(a), lg12(b), lg13(c), lg10(d), toe(t) {}
  explicit FourBarGeometry(const LegLinks& k, double t = 0.0)
      : lg1(k.lg1), lg12(k.lg12), lg13(k.lg13), lg10(k.lg10), toe(t) {}

  LegLinks links() const { return {lg1, lg12, lg13, lg10}; }

  void validate() const {
    if (!(lg1 > 0 && lg12 > 0 && lg13 > 0 && lg10 > 0))
      throw Error(ErrorKind::BadParams, "leg link lengths must be positive");
    if (!(toe >= 0)) throw Error(ErrorKind::BadParams, "toe offset must be non-negative");
  }

  bool is_parallelogram(double eps = 1e-12) const {
    return std::abs(lg1 - lg13) < eps && std::abs(lg12 - lg10) < eps;
  }

  /// Grashof sum s + l <= p + q.
  bool is_grashof() const {
    std::array<double, 4> v{lg1, lg12, lg13, lg10};
    std::sort(v.begin(), v.end());
    return v[0] + v[3] <= v[1] + v[2];
  }
};

/// `theta_lg12` is the coupler angle relative to the input link.
struct FourBarState {
  double theta_lg1 = 0.0;
  double theta_lg12 = 0.0;
  double theta_lg13 = 0.0;
  Vec2 foot_tip = Vec2::Zero();

  LegAngles angles() const { return {theta_lg1, theta_lg12, theta_lg13}; }
};

/// Circuit of the leg quadrilateral O1-A-Q-O2 (A input tip, Q output tip).
/// Open keeps Q and O1 on opposite sides of the diagonal A-O2; for a
/// parallelogram that is the parallel configuration.
enum class LegMode { Open, Crossed };

inline constexpr Sign kParallelBranch = Sign::Minus;  // root sign for 0 < theta_lg1 < pi

inline Vec2 leg_foot(const FourBarGeometry& g, double theta_lg13) {
  return Vec2(g.lg10, 0.0) + (g.lg13 + g.toe) * dir(theta_lg13);
}

/// Closed-form leg position. One root sign serves both passive angles.
inline FourBarState leg_fk(const FourBarGeometry& g, double theta_lg1,
                           Sign branch = kParallelBranch) {
  const double a = g.lg1, b = g.lg12, c = g.lg13, d = g.lg10;
  const double ct = std::cos(theta_lg1), st = std::sin(theta_lg1);
  const double s = as_double(branch);

  const double R1 = d / a, R2 = d / c, R4 = d / b;
  const double R3 = (a * a + c * c + d * d - b * b) / (2 * a * c);
  const double R5 = (c * c - d * d - a * a - b * b) / (2 * a * b);

  const double G = ct - R1 - R2 * ct + R3;
  const double H = -2 * st;
  const double I = R1 - (R2 + 1) * ct + R3;
  const double J = ct - R1 + R4 * ct + R5;
  const double K = -2 * st;
  const double L = R1 + (R4 - 1) * ct + R5;

  if (std::abs(2 * J) < 1e-12 || std::abs(2 * G) < 1e-12)
    throw Error(ErrorKind::DegenerateDenominator, "leg fold-back configuration");

  const double disc12 =
      detail::clamp_discriminant(K * K - 4 * J * L, K * K + std::abs(4 * J * L), "leg coupler");
  const double disc13 =
      detail::clamp_discriminant(H * H - 4 * G * I, H * H + std::abs(4 * G * I), "leg output");

  const double coupler_abs = 2 * std::atan((-K + s * std::sqrt(disc12)) / (2 * J));
  FourBarState out;
  out.theta_lg1 = normalize_angle(theta_lg1);
  out.theta_lg13 = normalize_angle(2 * std::atan((-H + s * std::sqrt(disc13)) / (2 * G)));
  out.theta_lg12 = normalize_angle(coupler_abs - theta_lg1);
  out.foot_tip = leg_foot(g, out.theta_lg13);
  return out;
}

inline LegMode leg_mode(const FourBarGeometry& g, const FourBarState& s) {
  const Vec2 a = g.lg1 * dir(s.theta_lg1);
  const Vec2 o2(g.lg10, 0.0);
  const Vec2 q = o2 + g.lg13 * dir(s.theta_lg13);
  const double side_q = cross(o2 - a, q - a);
  const double side_o1 = cross(o2 - a, -a);
  return side_q * side_o1 < 0 ? LegMode::Open : LegMode::Crossed;
}

/// Leg position in the requested circuit; picks the matching root sign.
inline FourBarState leg_fk(const FourBarGeometry& g, double theta_lg1, LegMode mode) {
  const FourBarState first = leg_fk(g, theta_lg1, kParallelBranch);
  if (leg_mode(g, first) == mode) return first;
  return leg_fk(g, theta_lg1, flip(kParallelBranch));
}

inline Vec2 leg_residual(const FourBarGeometry& g, const FourBarState& s) {
  return detail::leg_loop(g.links(), s.angles());
}

struct FourBarJacobians {
  Mat2 K;      // columns: coupler (relative), input
  Mat2 Kstar;  // columns: output, coupler (relative)
};

inline FourBarJacobians leg_jacobians(const FourBarGeometry& g, const FourBarState& s) {
  const double ca = s.theta_lg1 + s.theta_lg12;
  FourBarJacobians j;
  j.K << -g.lg12 * std::sin(ca), -g.lg1 * std::sin(s.theta_lg1),
      g.lg12 * std::cos(ca), g.lg1 * std::cos(s.theta_lg1);
  j.Kstar << g.lg13 * std::sin(s.theta_lg13), -g.lg12 * std::sin(ca),
      -g.lg13 * std::cos(s.theta_lg13), g.lg12 * std::cos(ca);
  return j;
}

inline double leg_det_kstar_closed(const FourBarGeometry& g, const FourBarState& s) {
  return -g.lg12 * g.lg13 * std::sin(s.theta_lg1 + s.theta_lg12 - s.theta_lg13);
}

inline bool leg_singular(const FourBarGeometry&, const FourBarState& s, double tol = 1e-8) {
  return std::abs(std::sin(s.theta_lg1 + s.theta_lg12 - s.theta_lg13)) < tol;
}

}  // namespace lizard
