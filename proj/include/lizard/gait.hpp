#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lizard/robot.hpp"

namespace lizard {

enum class GaitKind { Walk, Trot, TurnLeft, TurnRight };

inline const char* to_string(GaitKind k) {
  switch (k) {
    case GaitKind::Walk: return "walk";
    case GaitKind::Trot: return "trot";
    case GaitKind::TurnLeft: return "turn-left";
    case GaitKind::TurnRight: return "turn-right";
  }
  return "?";
}

inline std::optional<GaitKind> parse_gait_kind(const std::string& s) {
  if (s == "walk") return GaitKind::Walk;
  if (s == "trot") return GaitKind::Trot;
  if (s == "turn-left") return GaitKind::TurnLeft;
  if (s == "turn-right") return GaitKind::TurnRight;
  return std::nullopt;
}

/// Overrides for profile(); unset fields keep the per-kind defaults.
struct GaitParams {
  std::optional<double> amplitude;        // rad; outer side for turns
  std::optional<double> inner_amplitude;  // rad; turns only
  std::optional<double> period;           // s
  std::optional<double> duty;
};

/// Per-actuator sweep, actuators ordered a1..a4.
struct GaitProfile {
  GaitKind kind = GaitKind::Walk;
  std::array<double, 4> amplitude{};
  std::array<double, 4> phase{};
  std::array<double, 4> offset{};
  double period = 2.0;
  double duty = 0.5;
};

/// Left actuators (a1, a4) sweep with +1, right ones with -1, so equal
/// amplitude and phase produce mirrored motion.
inline constexpr std::array<double, 4> kActuatorSide{1.0, -1.0, -1.0, 1.0};

/// One period of the sweep over phase u in [0, 1): a half cosine from +1 to -1
/// during the first `duty` of the cycle and back during the rest. C1 at both
/// joins; a plain cosine when duty = 0.5.
inline double waveform(double u, double duty) {
  u -= std::floor(u);
  if (u < duty) return std::cos(kPi * u / duty);
  return -std::cos(kPi * (u - duty) / (1.0 - duty));
}

inline GaitProfile profile(GaitKind kind, const RobotConfig& cfg, const GaitParams& p = {}) {
  GaitProfile g;
  g.kind = kind;
  const auto n = cfg.neutral().as_array();
  g.offset = n;
  g.period = p.period.value_or(2.0);

  double outer = 0.0, inner = 0.0;
  switch (kind) {
    case GaitKind::Walk:
      outer = inner = p.amplitude.value_or(deg2rad(25.0));
      g.duty = p.duty.value_or(0.75);
      break;
    case GaitKind::Trot:
      outer = inner = p.amplitude.value_or(deg2rad(30.0));
      g.duty = p.duty.value_or(0.5);
      break;
    case GaitKind::TurnLeft:
    case GaitKind::TurnRight:
      outer = p.amplitude.value_or(deg2rad(30.0));
      inner = p.inner_amplitude.value_or(deg2rad(10.0));
      g.duty = p.duty.value_or(0.5);
      break;
  }

  // Diagonal pairs: a1 (front left) with a3 (rear right), a2 with a4.
  g.phase = {0.0, kPi, 0.0, kPi};
  g.amplitude = {outer, outer, outer, outer};
  if (kind == GaitKind::TurnLeft) g.amplitude = {inner, outer, outer, inner};
  if (kind == GaitKind::TurnRight) {
    g.amplitude = {outer, inner, inner, outer};
    g.phase = {kPi, 0.0, kPi, 0.0};
  }

  if (!(g.period > 0)) throw Error(ErrorKind::BadParams, "gait period must be positive");
  if (!(g.duty > 0 && g.duty < 1)) throw Error(ErrorKind::BadParams, "duty must lie in (0, 1)");
  for (double a : g.amplitude)
    if (!(a >= 0 && a <= cfg.joint_range + 1e-12))
      throw Error(ErrorKind::BadParams, "gait amplitude outside the joint range");
  return g;
}

inline ActuatorCommand command_at(const GaitProfile& g, double t) {
  std::array<double, 4> a{};
  for (std::size_t i = 0; i < 4; ++i)
    a[i] = g.offset[i] + kActuatorSide[i] * g.amplitude[i] *
                             waveform(t / g.period + g.phase[i] / (2 * kPi), g.duty);
  return ActuatorCommand::from_array(a);
}

struct TrajectorySample {
  double t = 0.0;
  ActuatorCommand cmd;
  RobotState state;
  SingularityReport singularity;
  int leg_singular = 0;

  bool flagged() const { return singularity.gain || singularity.loss || leg_singular > 0; }
};

struct Trajectory {
  GaitProfile profile;
  std::vector<TrajectorySample> samples;

  double max_residual(const RobotConfig& cfg) const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, max_loop_residual(cfg, s.state));
    return m;
  }
  int singular_count() const {
    int n = 0;
    for (const auto& s : samples) n += s.flagged() ? 1 : 0;
    return n;
  }
  /// Largest foot-tip distance between the first and last samples, mm.
  double foot_gap() const {
    if (samples.empty()) return 0.0;
    double m = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      m = std::max(m, (samples.front().state.foot_tips[k] - samples.back().state.foot_tips[k]).norm());
    return m;
  }
};

inline std::size_t sample_count(double n_cycles, double period, double dt) {
  return static_cast<std::size_t>(std::floor(n_cycles * period / dt + 1e-9)) + 1;
}

inline Trajectory rollout(const RobotConfig& cfg, const GaitProfile& g, double n_cycles, double dt,
                          double tol = kDefaultSingularTol) {
  if (!(dt > 0)) throw Error(ErrorKind::BadParams, "dt must be positive");
  if (!(n_cycles > 0)) throw Error(ErrorKind::BadParams, "cycle count must be positive");
  Trajectory tr{g, {}};
  const std::size_t n = sample_count(n_cycles, g.period, dt);
  tr.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    TrajectorySample s;
    s.t = static_cast<double>(i) * dt;
    s.cmd = command_at(g, s.t);
    try {
      s.state = solve(cfg, s.cmd);
    } catch (const Error& e) {
      throw Error(e.kind(), "t=" + std::to_string(s.t) + " s: " + e.detail());
    }
    s.singularity = full_singularity(cfg, s.state, tol);
    s.leg_singular = leg_singular_count(cfg, s.state, tol);
    tr.samples.push_back(std::move(s));
  }
  return tr;
}

}  // namespace lizard
