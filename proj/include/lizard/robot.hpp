#pragma once

#include <array>
#include <string>
#include <vector>

#include "lizard/core.hpp"
#include "lizard/fivebar.hpp"
#include "lizard/fourbar.hpp"

namespace lizard {

using Mat8 = Eigen::Matrix<double, 8, 8>;

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // rad

  Vec2 apply(const Vec2& local) const {
    const double c = std::cos(heading), s = std::sin(heading);
    return {x + c * local.x() - s * local.y(), y + s * local.x() + c * local.y()};
  }
};

/// Actuator angles in radians. a1 -> theta1, a2 -> theta4, a3 -> theta8,
/// a4 -> theta5.
struct ActuatorCommand {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;

  std::array<double, 4> as_array() const { return {a1, a2, a3, a4}; }
  static ActuatorCommand from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
  }
};

/// Left/right mirror image of a command about the chassis axis.
inline ActuatorCommand mirror(const ActuatorCommand& c) {
  return {kPi - c.a2, kPi - c.a1, kPi - c.a4, kPi - c.a3};
}

struct Branches {
  Sign head = Sign::Minus;      // endpoint away from the base (local -y side)
  Sign tail = Sign::Plus;       // endpoint away from the base (local +y side)
  Sign left_body = Sign::Plus;  // knee outward; the right body takes the opposite sign
  LegMode legs = LegMode::Open;
};

struct RobotConfig {
  LinkSet links{};
  double toe = 0.0;                    // foot pad extension, mm
  double splay = deg2rad(12.0);        // neutral actuator offset from straight down/up
  double joint_range = deg2rad(35.0);  // allowed excursion about neutral
  double tail_y = 0.0;                 // world y of the tail base line
  double leg_offset = 20.0;            // lateral gap between a base pivot and its leg mount
  Branches branches{};
  // Leg order: 1 front left, 2 front right, 3 rear right, 4 rear left.
  std::array<Pose2, 4> leg_mounts = default_leg_mounts(LinkSet{}, 20.0, 0.0);

  static std::array<Pose2, 4> default_leg_mounts(const LinkSet& k, double offset, double tail_y) {
    const double yh = tail_y + k[10];
    const double xf = k[0] / 2 + offset, xr = k[5] / 2 + offset;
    // Headings point every crank outward at the neutral pose.
    return {Pose2{-xf, yh, -kPi / 2}, Pose2{xf, yh, kPi / 2}, Pose2{xr, tail_y, -kPi / 2},
            Pose2{-xr, tail_y, kPi / 2}};
  }

  FiveBarGeometry head_geom() const { return {links[0], links[1], links[2], links[3], links[4]}; }
  FiveBarGeometry tail_geom() const { return {links[5], links[6], links[7], links[8], links[9]}; }
  FourBarGeometry leg_geom(int) const { return FourBarGeometry(links.leg, toe); }

  double head_y() const { return tail_y + links[10]; }

  /// Right-side legs (2, 3) are mirror-handed copies of the left legs.
  static bool mirrored_leg(int k) { return k == 1 || k == 2; }

  ActuatorCommand neutral() const {
    return {-kPi / 2 - splay, -kPi / 2 + splay, kPi / 2 + splay, kPi / 2 - splay};
  }

  /// Value checks only; says nothing about whether the linkages assemble.
  void validate_values() const {
    links.validate();
    leg_geom(0).validate();
    if (!(joint_range > 0 && joint_range < kPi))
      throw Error(ErrorKind::BadParams, "joint range must lie in (0, 180) degrees");
    if (!(leg_offset >= 0)) throw Error(ErrorKind::BadParams, "leg offset must be >= 0");
  }
  void validate() const {
    validate_values();
    head_geom().validate();
    tail_geom().validate();
  }
};

/// Throws RangeViolation if any actuator leaves neutral +- joint_range.
inline void check_command(const RobotConfig& cfg, const ActuatorCommand& cmd) {
  const auto n = cfg.neutral().as_array();
  const auto a = cmd.as_array();
  for (std::size_t i = 0; i < 4; ++i)
    if (std::abs(normalize_angle(a[i] - n[i])) > cfg.joint_range + 1e-12)
      throw Error(ErrorKind::RangeViolation,
                  "actuator a" + std::to_string(i + 1) + " outside its joint range");
}

struct RobotState {
  JointState joints;
  FiveBarState head;  // local frames
  FiveBarState tail;
  std::array<FourBarState, 4> legs;
  Vec2 head_point = Vec2::Zero();  // world
  Vec2 tail_point = Vec2::Zero();  // world
  Vec2 body_left = Vec2::Zero();   // (x31, y31), body frame
  Vec2 body_right = Vec2::Zero();  // (x41, y41), body frame
  std::array<Vec2, 4> foot_tips{}; // world
};

// ---------------------------------------------------------------------------
// Frames. Head and tail local y grows away from the chassis; body frames have
// local x along world +y from the tail pivots and local y along world -x.

inline Vec2 head_to_world(const RobotConfig& cfg, const Vec2& p) {
  return {p.x(), cfg.head_y() - p.y()};
}
inline Vec2 tail_to_world(const RobotConfig& cfg, const Vec2& p) {
  return {p.x(), cfg.tail_y - p.y()};
}
inline Vec2 body_to_world(const RobotConfig& cfg, bool left, const Vec2& p) {
  const double ox = left ? -cfg.links[5] / 2 : cfg.links[5] / 2;
  return {ox - p.y(), cfg.tail_y + p.x()};
}

inline Vec2 leg_foot_world(const RobotConfig& cfg, int k, const FourBarState& s) {
  Vec2 f = s.foot_tip;
  if (RobotConfig::mirrored_leg(k)) f.x() = -f.x();
  return cfg.leg_mounts[static_cast<std::size_t>(k)].apply(f);
}

namespace detail {

template <class F>
auto tagged(const char* where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(where) + ": " + e.detail());
  }
}

struct BodySolution {
  double prox_tail;
  double distal;
  double prox_head;
  double slider;
};

// Distal pair symmetric about the body axis: the x equation fixes
// |theta_distal|, the lateral slider absorbs the y equation.
inline BodySolution solve_body(double ground, double lt, double la, double lb, double lh,
                               double t_tail, double t_head, Sign branch, const char* name) {
  const double x = ground - lt * std::cos(t_tail) - lh * std::cos(t_head);
  const double reach = la + lb;
  if (std::abs(x) > reach)
    throw Error(ErrorKind::CouplingInfeasible,
                std::string(name) + ": imposed end angles leave the distal pair out of reach");
  const double t = as_double(branch) * std::acos(std::clamp(x / reach, -1.0, 1.0));
  const double s = lt * std::sin(t_tail) + (la - lb) * std::sin(t) - lh * std::sin(t_head);
  if (std::abs(s) > ground / 2)
    throw Error(ErrorKind::CouplingInfeasible, std::string(name) + ": slider travel exceeded");
  return {t_tail, t, t_head, s};
}

}  // namespace detail

/// Kinematic connection of the two sub-systems: head and tail five-bars from
/// the actuators, legs by angle pass-through, bodies from the coupled end
/// angles.
inline RobotState solve(const RobotConfig& cfg, const ActuatorCommand& cmd) {
  const LinkSet& k = cfg.links;
  const auto& br = cfg.branches;
  RobotState st;
  JointState& j = st.joints;

  st.head = detail::tagged("head", [&] { return fk(cfg.head_geom(), cmd.a1, cmd.a2, br.head); });
  st.tail = detail::tagged("tail", [&] { return fk(cfg.tail_geom(), cmd.a4, cmd.a3, br.tail); });
  j.theta(1) = st.head.theta1;
  j.theta(2) = st.head.theta2;
  j.theta(3) = st.head.theta3;
  j.theta(4) = st.head.theta4;
  j.theta(5) = st.tail.theta1;
  j.theta(6) = st.tail.theta2;
  j.theta(7) = st.tail.theta3;
  j.theta(8) = st.tail.theta4;

  // Leg k is driven by theta1, theta4, theta8, theta5 for k = 1..4.
  const std::array<double, 4> drive{j.theta(1), j.theta(4), j.theta(8), j.theta(5)};
  static constexpr const char* kLegNames[4] = {"leg1", "leg2", "leg3", "leg4"};
  for (int n = 0; n < 4; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    const double input = RobotConfig::mirrored_leg(n) ? kPi - drive[idx] : drive[idx];
    st.legs[idx] = detail::tagged(kLegNames[n], [&] {
      return leg_fk(cfg.leg_geom(n), normalize_angle(input), br.legs);
    });
    j.legs[idx] = st.legs[idx].angles();
    st.foot_tips[idx] = leg_foot_world(cfg, n, st.legs[idx]);
  }

  const auto left = detail::solve_body(k[10], k[11], k[12], k[13], k[14],
                                       normalize_angle(j.theta(5) - k.C(3)),
                                       normalize_angle(k.C(1) + j.theta(1)), br.left_body,
                                       "left_body");
  j.theta(9) = left.prox_tail;
  j.theta(10) = left.distal;
  j.theta(11) = -left.distal;
  j.theta(12) = left.prox_head;
  j.s_left = left.slider;

  const auto right = detail::solve_body(k[15], k[16], k[17], k[18], k[19],
                                        normalize_angle(j.theta(8) - k.C(4)),
                                        normalize_angle(k.C(2) + j.theta(4)),
                                        flip(br.left_body), "right_body");
  j.theta(13) = right.prox_tail;
  j.theta(14) = right.distal;
  j.theta(15) = -right.distal;
  j.theta(16) = right.prox_head;
  j.s_right = right.slider;

  st.head_point = head_to_world(cfg, st.head.endpoint);
  st.tail_point = tail_to_world(cfg, st.tail.endpoint);
  st.body_left = {(k[13] * std::cos(j.theta(11)) + k[14] * std::cos(j.theta(12))) / 2,
                  (k[13] * std::sin(j.theta(11)) + k[14] * std::sin(j.theta(12))) / 2};
  st.body_right = {(k[19] * std::cos(j.theta(16)) + k[18] * std::cos(j.theta(15))) / 2,
                   (k[19] * std::sin(j.theta(16)) + k[18] * std::sin(j.theta(15))) / 2};
  return st;
}

/// The six coupling equations, evaluated as residuals (rad).
inline std::array<double, 6> coupling_residuals(const LinkSet& k, const JointState& j) {
  return {normalize_angle(j.theta(10) + j.theta(11)),
          normalize_angle(j.theta(14) + j.theta(15)),
          normalize_angle(j.theta(1) - j.theta(12) + k.C(1)),
          normalize_angle(j.theta(4) - j.theta(16) + k.C(2)),
          normalize_angle(j.theta(9) - j.theta(5) + k.C(3)),
          normalize_angle(j.theta(13) - j.theta(8) + k.C(4))};
}

/// Largest loop-closure residual over all eight loops, mm.
inline double max_loop_residual(const RobotConfig& cfg, const RobotState& s) {
  double m = 0.0;
  for (LoopId id : kAllLoops) m = std::max(m, loop_residual(cfg.links, s.joints, id).max_abs());
  return m;
}

// ---------------------------------------------------------------------------
// Velocity matrices of sub-system I

struct SystemMatrices {
  Mat8 K = Mat8::Zero();
  Mat8 Kstar = Mat8::Zero();
};

/// Rows: head, tail, left body, right body. Only joint angles are read, so
/// any JointState may be passed, closed or not.
inline SystemMatrices assemble_k_matrices(const RobotConfig& cfg, const JointState& j) {
  const LinkSet& k = cfg.links;
  auto th = [&](int i) { return j.theta(i); };
  SystemMatrices m;

  const auto head = jacobians(cfg.head_geom(), {th(1), th(2), th(3), th(4), Vec2::Zero()});
  const auto tail = jacobians(cfg.tail_geom(), {th(5), th(6), th(7), th(8), Vec2::Zero()});
  m.K.block<2, 2>(0, 0) = head.K;
  m.Kstar.block<2, 2>(0, 0) = head.Kstar;
  m.K.block<2, 2>(2, 2) = tail.K;
  m.Kstar.block<2, 2>(2, 2) = tail.Kstar;

  const double c1 = k.C(1), c2 = k.C(2), c3 = k.C(3), c4 = k.C(4);
  m.K.block<2, 2>(4, 4) << k[11] * std::sin(c3 - th(5)), -k[14] * std::sin(c1 + th(1)),
      k[11] * std::cos(c3 - th(5)), -k[14] * std::cos(c1 + th(1));
  m.K.block<2, 2>(6, 6) << k[16] * std::sin(c4 - th(8)), -k[19] * std::sin(c2 + th(4)),
      k[16] * std::cos(c4 - th(8)), -k[19] * std::cos(c2 + th(4));

  m.Kstar.block<2, 2>(4, 4) << -k[13] * std::sin(th(11)), k[12] * std::sin(th(11)),
      k[13] * std::cos(th(11)), k[12] * std::cos(th(11));
  m.Kstar.block<2, 2>(6, 6) << -k[17] * std::sin(th(14)), k[18] * std::sin(th(14)),
      k[17] * std::cos(th(14)), k[18] * std::cos(th(14));
  return m;
}

inline SystemMatrices assemble_k_matrices(const RobotConfig& cfg, const RobotState& s) {
  return assemble_k_matrices(cfg, s.joints);
}

/// The four factors of det Kstar, as named in reports.
struct SingularFactor {
  std::string name;
  double value;
};

inline std::array<SingularFactor, 4> singular_factors(const JointState& j) {
  return {SingularFactor{"sin(theta2+theta3)", std::sin(j.theta(2) + mirrored(j.theta(3)))},
          SingularFactor{"sin(theta6+theta7)", std::sin(j.theta(6) + mirrored(j.theta(7)))},
          SingularFactor{"sin(2*theta11)", std::sin(2 * j.theta(11))},
          SingularFactor{"sin(2*theta14)", std::sin(2 * j.theta(14))}};
}

/// Factored determinant of the 8x8 Kstar:
/// l2 l3 l7 l8 l12 l13 l17 l18 / 2 * sin 2t11 * sin 2t14 * (cos(a - b) - cos(a + b))
/// with a = theta2 + theta3 and b = theta6 + theta7 in the mirrored convention.
inline double det_kstar_factored(const LinkSet& k, const JointState& j) {
  const double a = j.theta(2) + mirrored(j.theta(3));
  const double b = j.theta(6) + mirrored(j.theta(7));
  return k[2] * k[3] * k[7] * k[8] * k[12] * k[13] * k[17] * k[18] / 2 *
         std::sin(2 * j.theta(11)) * std::sin(2 * j.theta(14)) * (std::cos(a - b) - std::cos(a + b));
}

struct SingularityReport {
  bool gain = false;
  bool loss = false;
  std::vector<std::string> vanishing_factors;
  std::vector<std::string> loss_blocks;
  double det_K = 0.0;
  double det_Kstar = 0.0;
};

inline SingularityReport full_singularity(const RobotConfig& cfg, const RobotState& s,
                                          double tol = kDefaultSingularTol) {
  const auto m = assemble_k_matrices(cfg, s.joints);
  SingularityReport r;
  r.det_K = m.K.determinant();
  r.det_Kstar = m.Kstar.determinant();
  for (const auto& f : singular_factors(s.joints))
    if (std::abs(f.value) < tol) r.vanishing_factors.push_back(f.name);
  r.gain = !r.vanishing_factors.empty();

  static constexpr const char* kBlocks[4] = {"head", "tail", "left_body", "right_body"};
  const LinkSet& k = cfg.links;
  const std::array<double, 4> scale{k[1] * k[4], k[6] * k[9], k[11] * k[14], k[16] * k[19]};
  for (int b = 0; b < 4; ++b) {
    const double d = m.K.block<2, 2>(2 * b, 2 * b).determinant();
    if (std::abs(d) < tol * scale[static_cast<std::size_t>(b)]) r.loss_blocks.push_back(kBlocks[b]);
  }
  r.loss = !r.loss_blocks.empty();
  return r;
}

/// Number of legs whose four-bar is structurally singular.
inline int leg_singular_count(const RobotConfig& cfg, const RobotState& s,
                              double tol = kDefaultSingularTol) {
  int n = 0;
  for (int i = 0; i < 4; ++i)
    n += leg_singular(cfg.leg_geom(i), s.legs[static_cast<std::size_t>(i)], tol) ? 1 : 0;
  return n;
}

}  // namespace lizard
