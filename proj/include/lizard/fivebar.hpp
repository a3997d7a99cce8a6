#pragma once

#include <utility>

#include "lizard/common.hpp"

namespace lizard {

/// Symmetric-frame five-bar: base pivots at (-l0/2, 0) and (+l0/2, 0), left
/// chain l1 -> l2, right chain l4 -> l3, both meeting at the endpoint.
struct FiveBarGeometry {
  double l0 = 20.0;
  double l1 = 30.0;
  double l2 = 50.0;
  double l3 = 50.0;
  double l4 = 30.0;

  void validate() const {
    if (!(l0 > 0 && l1 > 0 && l2 > 0 && l3 > 0 && l4 > 0))
      throw Error(ErrorKind::BadParams, "five-bar link lengths must be positive");
    if (!(l1 + l2 > l0 / 2))
      throw Error(ErrorKind::BadParams, "five-bar cannot assemble: l1 + l2 <= l0/2");
  }

  Vec2 left_base() const { return {-l0 / 2, 0.0}; }
  Vec2 right_base() const { return {l0 / 2, 0.0}; }
};

struct FiveBarState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta4 = 0.0;
  Vec2 endpoint = Vec2::Zero();
};

/// Elbow choice per chain. Plus puts the elbow on the outer side: the left
/// elbow counter-clockwise of the ray from its pivot to the endpoint, the
/// right elbow clockwise of its ray. (+,+) is the mirror-symmetric mode.
struct BranchSelector {
  Sign elbow_left = Sign::Plus;
  Sign elbow_right = Sign::Plus;

  bool operator==(const BranchSelector&) const = default;
};

inline Vec2 left_elbow(const FiveBarGeometry& g, double theta1) {
  return g.left_base() + g.l1 * dir(theta1);
}
inline Vec2 right_elbow(const FiveBarGeometry& g, double theta4) {
  return g.right_base() + g.l4 * dir(theta4);
}

inline Vec2 fivebar_residual(const FiveBarGeometry& g, const FiveBarState& s) {
  return g.l1 * dir(s.theta1) + g.l2 * dir(s.theta2) - g.l3 * dir(s.theta3) -
         g.l4 * dir(s.theta4) - Vec2(g.l0, 0.0);
}

/// Closed-form forward position. `assembly` picks the circle intersection:
/// Plus places the endpoint on the left of the elbow-to-elbow line E1 -> E2
/// (above the base for the symmetric pose). The same quadratic root sign is
/// used for theta3 and theta2; mixed signs never close the loop.
inline FiveBarState fk(const FiveBarGeometry& g, double theta1, double theta4,
                       Sign assembly = Sign::Plus) {
  const double s1 = std::sin(theta1), c1 = std::cos(theta1);
  const double s4 = std::sin(theta4), c4 = std::cos(theta4);
  const double root = -as_double(assembly);

  const double K1 = g.l4 * s4 - g.l1 * s1;
  const double K2 = g.l4 * c4 - g.l1 * c1 + g.l0;
  const double K3 = -K1;
  const double K4 = g.l1 * c1 - g.l4 * c4 - g.l0;

  const double A = (g.l3 * g.l3 - 2 * K2 * g.l3 - g.l2 * g.l2 + K2 * K2 + K1 * K1) / 2;
  const double B = 2 * K1 * g.l3;
  const double C = (g.l3 * g.l3 + 2 * K2 * g.l3 - g.l2 * g.l2 + K2 * K2 + K1 * K1) / 2;
  const double D = (g.l3 * g.l3 - g.l2 * g.l2 + 2 * K4 * g.l2 - K4 * K4 - K3 * K3) / 2;
  const double E = 2 * K3 * g.l2;
  const double F = (g.l3 * g.l3 - g.l2 * g.l2 - 2 * K4 * g.l2 - K4 * K4 - K3 * K3) / 2;

  if (std::abs(2 * A) < 1e-12 || std::abs(2 * D) < 1e-12)
    throw Error(ErrorKind::DegenerateDenominator, "five-bar fold-back configuration");

  const double disc3 =
      detail::clamp_discriminant(B * B - 4 * A * C, B * B + std::abs(4 * A * C), "five-bar theta3");
  const double disc2 =
      detail::clamp_discriminant(E * E - 4 * D * F, E * E + std::abs(4 * D * F), "five-bar theta2");

  FiveBarState s;
  s.theta1 = normalize_angle(theta1);
  s.theta4 = normalize_angle(theta4);
  s.theta3 = normalize_angle(2 * std::atan((-B + root * std::sqrt(disc3)) / (2 * A)));
  s.theta2 = normalize_angle(2 * std::atan((E + root * std::sqrt(disc2)) / (2 * D)));
  s.endpoint = left_elbow(g, theta1) + g.l2 * dir(s.theta2);
  return s;
}

/// Which intersection `state` sits on, in the sense of fk's `assembly`.
inline Sign assembly_of(const FiveBarGeometry& g, const FiveBarState& s) {
  const Vec2 e1 = left_elbow(g, s.theta1);
  const Vec2 e2 = right_elbow(g, s.theta4);
  return cross(e2 - e1, s.endpoint - e1) >= 0 ? Sign::Plus : Sign::Minus;
}

/// Elbow working mode of a closed state.
inline BranchSelector working_mode(const FiveBarGeometry& g, const FiveBarState& s) {
  const Vec2 b1 = g.left_base(), b2 = g.right_base();
  const double cl = cross(s.endpoint - b1, left_elbow(g, s.theta1) - b1);
  const double cr = cross(s.endpoint - b2, right_elbow(g, s.theta4) - b2);
  return {cl >= 0 ? Sign::Plus : Sign::Minus, cr <= 0 ? Sign::Plus : Sign::Minus};
}

namespace detail {

// Angle of a proximal link of length a whose far end sits at distance b from
// `p`. `ccw` chooses the elbow on the counter-clockwise side of base -> p.
inline double chain_ik(const Vec2& base, const Vec2& p, double a, double b, bool ccw,
                       const char* side) {
  const Vec2 v = p - base;
  const double d = v.norm();
  const double slack = 1e-12 * (a + b);
  if (d < slack || d > a + b + slack || d < std::abs(a - b) - slack)
    throw Error(ErrorKind::OutOfWorkspace, std::string(side) + " chain cannot reach endpoint");
  const double cosa = std::clamp((a * a + d * d - b * b) / (2 * a * d), -1.0, 1.0);
  const double alpha = std::acos(cosa);
  const double phi = std::atan2(v.y(), v.x());
  return normalize_angle(ccw ? phi + alpha : phi - alpha);
}

}  // namespace detail

/// Inverse position: active angles (theta1, theta4) placing the endpoint at
/// `p` in the requested working mode.
inline std::pair<double, double> ik(const FiveBarGeometry& g, const Vec2& p,
                                   BranchSelector branch = {}) {
  const double t1 = detail::chain_ik(g.left_base(), p, g.l1, g.l2,
                                     branch.elbow_left == Sign::Plus, "left");
  const double t4 = detail::chain_ik(g.right_base(), p, g.l4, g.l3,
                                     branch.elbow_right == Sign::Minus, "right");
  return {t1, t4};
}

/// Full state from an endpoint: ik plus the passive angles read off the chains.
inline FiveBarState ik_state(const FiveBarGeometry& g, const Vec2& p, BranchSelector branch = {}) {
  const auto [t1, t4] = ik(g, p, branch);
  FiveBarState s;
  s.theta1 = t1;
  s.theta4 = t4;
  const Vec2 a = p - left_elbow(g, t1);
  const Vec2 b = p - right_elbow(g, t4);
  s.theta2 = std::atan2(a.y(), a.x());
  s.theta3 = std::atan2(b.y(), b.x());
  s.endpoint = p;
  return s;
}

/// Angle of a subtracted-chain link as it enters the velocity matrices:
/// measured from the -x axis, clockwise.
inline double mirrored(double theta) { return kPi - theta; }

struct FiveBarJacobians {
  Mat2 K;      // active columns (theta1, mirrored theta4)
  Mat2 Kstar;  // passive columns (theta2, mirrored theta3)
};

/// Velocity matrices of the loop equations. The right-chain columns are
/// partials with respect to the mirrored angles pi - theta3 and pi - theta4,
/// which is the negative of the partial with respect to the stored angle.
inline FiveBarJacobians jacobians(const FiveBarGeometry& g, const FiveBarState& s) {
  const double p3 = mirrored(s.theta3), p4 = mirrored(s.theta4);
  FiveBarJacobians j;
  j.K << -g.l1 * std::sin(s.theta1), -g.l4 * std::sin(p4),
      g.l1 * std::cos(s.theta1), -g.l4 * std::cos(p4);
  j.Kstar << -g.l2 * std::sin(s.theta2), -g.l3 * std::sin(p3),
      g.l2 * std::cos(s.theta2), -g.l3 * std::cos(p3);
  return j;
}

/// det Kstar = l2 l3 sin(theta2 + (pi - theta3)).
inline double det_kstar_closed(const FiveBarGeometry& g, const FiveBarState& s) {
  return g.l2 * g.l3 * std::sin(s.theta2 + mirrored(s.theta3));
}

/// det K = l1 l4 sin(theta1 + (pi - theta4)).
inline double det_k_closed(const FiveBarGeometry& g, const FiveBarState& s) {
  return g.l1 * g.l4 * std::sin(s.theta1 + mirrored(s.theta4));
}

struct SingularityFlags {
  bool gain = false;
  bool loss = false;
};

inline constexpr double kDefaultSingularTol = 1e-8;

inline SingularityFlags is_singular(const FiveBarGeometry& g, const FiveBarState& s,
                                    double tol = kDefaultSingularTol) {
  const auto j = jacobians(g, s);
  return {std::abs(j.Kstar.determinant()) < tol * g.l2 * g.l3,
          std::abs(j.K.determinant()) < tol * g.l1 * g.l4};
}

}  // namespace lizard
