#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <span>
#include <vector>

#include "lizard/common.hpp"

namespace lizard {

// ---------------------------------------------------------------------------
// Mobility

struct JointCounts {
  int n_links = 2;  // includes the ground link
  int n_joints = 1;
  std::vector<int> joint_freedoms{1};

  void validate() const {
    if (n_links < 2) throw Error(ErrorKind::BadParams, "n_links must be >= 2");
    if (n_joints < 1) throw Error(ErrorKind::BadParams, "n_joints must be >= 1");
    if (static_cast<int>(joint_freedoms.size()) != n_joints)
      throw Error(ErrorKind::BadParams, "one freedom count per joint is required");
    for (int f : joint_freedoms)
      if (f < 1) throw Error(ErrorKind::BadParams, "joint freedom counts must be >= 1");
  }
};

/// Planar Kutzbach count M = 3(N - 1 - j) + sum f_i. May be <= 0 for
/// over-constrained chains.
inline int mobility(const JointCounts& counts) {
  counts.validate();
  const int sum_f = std::accumulate(counts.joint_freedoms.begin(), counts.joint_freedoms.end(), 0);
  return 3 * (counts.n_links - 1 - counts.n_joints) + sum_f;
}

inline JointCounts uniform_joints(int n_links, int n_joints, int freedom = 1) {
  return {n_links, n_joints, std::vector<int>(static_cast<std::size_t>(n_joints), freedom)};
}

// ---------------------------------------------------------------------------
// Link lengths (mm) and fixed ternary-link angles (rad)

struct LegLinks {
  double lg1 = 45.0;   // input
  double lg12 = 50.0;  // coupler
  double lg13 = 45.0;  // output
  double lg10 = 50.0;  // ground
};

struct LinkSet {
  // Table 1 after dimensional synthesis. The 45 mm row lists l16 a second
  // time; it is read as l17.
  std::array<double, 20> l{20.0, 30.0, 50.0, 50.0, 30.0,    // l0..l4   head
                           20.0, 30.0, 50.0, 50.0, 30.0,    // l5..l9   tail
                           135.0, 30.0, 45.0, 45.0, 30.0,   // l10..l14 left body
                           135.0, 30.0, 45.0, 45.0, 30.0};  // l15..l19 right body
  LegLinks leg{};
  std::array<double, 4> c{kPi / 2, kPi / 2, kPi / 2, kPi / 2};  // C1..C4

  double operator[](int i) const { return l.at(static_cast<std::size_t>(i)); }
  double& operator[](int i) { return l.at(static_cast<std::size_t>(i)); }
  double C(int i) const { return c.at(static_cast<std::size_t>(i - 1)); }

  void validate() const {
    for (std::size_t i = 0; i < l.size(); ++i)
      if (!(l[i] > 0.0))
        throw Error(ErrorKind::BadParams, "link l" + std::to_string(i) + " must be positive");
    if (!(leg.lg1 > 0 && leg.lg12 > 0 && leg.lg13 > 0 && leg.lg10 > 0))
      throw Error(ErrorKind::BadParams, "leg link lengths must be positive");
    for (double ci : c)
      if (!std::isfinite(ci)) throw Error(ErrorKind::BadParams, "C angles must be finite");
  }
};

// ---------------------------------------------------------------------------
// Joint state

/// Angles of one leg four-bar, expressed in the leg linkage frame.
/// `coupler` is measured relative to the input link.
struct LegAngles {
  double input = 0.0;
  double coupler = 0.0;
  double output = 0.0;
};

/// All joint variables of both sub-systems. Angles are stored in radians,
/// counter-clockwise from the +x axis of the owning sub-mechanism's frame.
struct JointState {
  std::array<double, 16> th{};  // theta1..theta16
  std::array<LegAngles, 4> legs{};
  double s_left = 0.0;   // mm
  double s_right = 0.0;  // mm

  double theta(int i) const { return th.at(static_cast<std::size_t>(i - 1)); }
  double& theta(int i) { return th.at(static_cast<std::size_t>(i - 1)); }

  void normalize() {
    for (double& a : th) a = normalize_angle(a);
    for (auto& g : legs) {
      g.input = normalize_angle(g.input);
      g.coupler = normalize_angle(g.coupler);
      g.output = normalize_angle(g.output);
    }
  }
};

enum class LoopId { Head, Tail, LeftBody, RightBody, Leg1, Leg2, Leg3, Leg4 };

inline constexpr std::array<LoopId, 8> kAllLoops{LoopId::Head,     LoopId::Tail, LoopId::LeftBody,
                                                 LoopId::RightBody, LoopId::Leg1, LoopId::Leg2,
                                                 LoopId::Leg3,      LoopId::Leg4};

inline const char* to_string(LoopId id) {
  switch (id) {
    case LoopId::Head: return "head";
    case LoopId::Tail: return "tail";
    case LoopId::LeftBody: return "left_body";
    case LoopId::RightBody: return "right_body";
    case LoopId::Leg1: return "leg1";
    case LoopId::Leg2: return "leg2";
    case LoopId::Leg3: return "leg3";
    case LoopId::Leg4: return "leg4";
  }
  return "?";
}

/// Loop-closure violation (mm), x and y components.
struct Residual {
  Vec2 values = Vec2::Zero();

  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
};

namespace detail {

// Five-bar loop  a1 + a2 - a3 - a4 - ground = 0.
inline Vec2 fivebar_loop(double l0, double l1, double l2, double l3, double l4, double t1, double t2,
                         double t3, double t4) {
  return l1 * dir(t1) + l2 * dir(t2) - l3 * dir(t3) - l4 * dir(t4) - Vec2(l0, 0.0);
}

// RRPRR body loop. The distal pair enters with its own angles, the head-side
// proximal link with its mirrored angle, and the slider displaces laterally.
inline Vec2 body_loop(double ground, double prox_tail, double distal_a, double distal_b,
                      double prox_head, double t_tail, double t_a, double t_b, double t_head,
                      double slider) {
  return prox_tail * dir(t_tail) + distal_a * dir(t_a) + distal_b * dir(t_b) +
         prox_head * dir(-t_head) - Vec2(ground, slider);
}

inline Vec2 leg_loop(const LegLinks& g, const LegAngles& a) {
  return g.lg1 * dir(a.input) + g.lg12 * dir(a.input + a.coupler) - g.lg13 * dir(a.output) -
         Vec2(g.lg10, 0.0);
}

}  // namespace detail

/// Evaluates the named vector loop at `state`; zero iff the loop closes.
inline Residual loop_residual(const LinkSet& k, const JointState& s, LoopId id) {
  switch (id) {
    case LoopId::Head:
      return {detail::fivebar_loop(k[0], k[1], k[2], k[3], k[4], s.theta(1), s.theta(2),
                                   s.theta(3), s.theta(4))};
    case LoopId::Tail:
      return {detail::fivebar_loop(k[5], k[6], k[7], k[8], k[9], s.theta(5), s.theta(6),
                                   s.theta(7), s.theta(8))};
    case LoopId::LeftBody:
      return {detail::body_loop(k[10], k[11], k[12], k[13], k[14], s.theta(9), s.theta(10),
                                s.theta(11), s.theta(12), s.s_left)};
    case LoopId::RightBody:
      return {detail::body_loop(k[15], k[16], k[17], k[18], k[19], s.theta(13), s.theta(14),
                                s.theta(15), s.theta(16), s.s_right)};
    case LoopId::Leg1: return {detail::leg_loop(k.leg, s.legs[0])};
    case LoopId::Leg2: return {detail::leg_loop(k.leg, s.legs[1])};
    case LoopId::Leg3: return {detail::leg_loop(k.leg, s.legs[2])};
    case LoopId::Leg4: return {detail::leg_loop(k.leg, s.legs[3])};
  }
  return {};
}

}  // namespace lizard
