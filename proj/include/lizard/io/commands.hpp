#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "lizard/core.hpp"
#include "lizard/gait.hpp"
#include "lizard/io/config.hpp"
#include "lizard/io/report.hpp"
#include "lizard/io/svg.hpp"
#include "lizard/io/table.hpp"
#include "lizard/robot.hpp"
#include "lizard/synthesis.hpp"

namespace lizard::io {

enum ExitCode : int { kOk = 0, kInputError = 2, kGeometryError = 3, kInfeasible = 4 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoUpperRegion:
      return kGeometryError;
    case ErrorKind::NoAssembly:
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::OutOfWorkspace:
    case ErrorKind::CouplingInfeasible:
    case ErrorKind::SingularHere:
      return kInfeasible;
    default:
      return kInputError;
  }
}

enum class Format { Csv, Json };

/// Options shared by all subcommands. Angles in degrees, lengths in mm.
struct Options {
  std::vector<std::string> argv;  // echoed in reports
  std::string config;             // empty: built-in defaults
  std::string out;                // empty: stdout
  std::string svg;
  std::string grid;
  std::string branch;
  Format format = Format::Csv;
  double tol = kDefaultSingularTol;

  // dof
  int n_links = 0;
  int n_joints = 0;
  std::vector<int> freedoms;
  // synth
  double r1 = 0, r2 = 0, r3 = 0, r3_mm = 0;
  // chart
  std::string kind;
  // fk / ik
  std::string mech = "head";
  std::vector<double> values;
  // gait
  std::optional<double> cycles;
  std::optional<double> dt;
  std::optional<double> amplitude;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

struct Loaded {
  ConfigFile file;
  RobotConfig robot;
  std::string canonical;
};

inline Loaded load(const Options& o) {
  Loaded l;
  l.file = o.config.empty() ? ConfigFile{} : load_config(o.config);
  l.canonical = serialize_config(l.file);
  l.robot = to_robot(l.file);
  return l;
}

inline std::string digest(const Options& o, const std::string& canonical) {
  std::string s = canonical;
  for (const auto& a : o.argv) s += '\x1f' + a;
  return sha256_hex(s);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path);
  f << text;
}

// Table to --out (or stdout), report to stdout (or stderr when the table
// went to stdout).
inline int emit(const Options& o, Streams s, const Table& t, RunReport& r, int fail_code) {
  const std::string body =
      o.format == Format::Json ? to_json(t).dump(1) + "\n" : to_csv(t);
  if (!o.out.empty()) {
    write_text(o.out, body);
    r.outputs.insert(r.outputs.begin(), o.out);
  } else {
    s.out << body;
  }
  std::ostream& rep = o.out.empty() ? s.err : s.out;
  rep << r.to_json().dump(1) << "\n";
  return r.ok() ? kOk : fail_code;
}

inline void print_kv(const Options& o, Streams s, const nlohmann::ordered_json& j) {
  if (o.format == Format::Json) {
    s.out << j.dump(1) << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_float()) s.out << fmt::format("{} = {:.9g}\n", k, v.get<double>());
    else if (v.is_string()) s.out << fmt::format("{} = {}\n", k, v.get<std::string>());
    else s.out << fmt::format("{} = {}\n", k, v.dump());
  }
}

inline GridSpec parse_chart_grid(const std::string& g, const FiveBarGeometry& geom) {
  if (g.empty()) return default_grid(geom);
  int nx = 0, ny = 0;
  char sep = 0;
  std::istringstream in(g);
  if (!(in >> nx >> sep >> ny) || (sep != 'x' && sep != 'X') || !in.eof())
    throw Error(ErrorKind::BadParams, "--grid must look like 200x200");
  return default_grid(geom, nx, ny);
}

inline BranchSelector parse_branch(const std::string& b) {
  if (b.empty()) return {};
  if (b.size() != 2) throw Error(ErrorKind::BadParams, "--branch must be two signs, e.g. ++");
  auto one = [](char c) {
    if (c == '+') return Sign::Plus;
    if (c == '-') return Sign::Minus;
    throw Error(ErrorKind::BadParams, "--branch signs must be + or -");
  };
  return {one(b[0]), one(b[1])};
}

inline Sign parse_assembly(const std::string& b, Sign fallback) {
  if (b.empty()) return fallback;
  if (b == "+") return Sign::Plus;
  if (b == "-") return Sign::Minus;
  throw Error(ErrorKind::BadParams, "--branch for fk must be + or -");
}

// One actuator axis: "v" or "lo:hi:n" in degrees.
inline std::vector<double> parse_axis(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto num = [&](const std::string& t) { return lizard::io::detail::parse_number(t, "--grid"); };
  if (parts.size() == 1) return {num(parts[0])};
  if (parts.size() != 3) throw Error(ErrorKind::BadParams, "grid axis must be v or lo:hi:n");
  const double lo = num(parts[0]), hi = num(parts[1]), nd = num(parts[2]);
  if (nd < 1 || nd != std::floor(nd)) throw Error(ErrorKind::BadParams, "grid count must be >= 1");
  const int n = static_cast<int>(nd);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : ((n - 1 - i) * lo + i * hi) / (n - 1));
  return v;
}

inline std::array<std::vector<double>, 4> parse_actuator_grid(const std::string& g) {
  if (g.empty()) throw Error(ErrorKind::BadParams, "empty actuator grid");
  std::vector<std::string> axes;
  std::string cur;
  for (char c : g) {
    if (c == ',') {
      axes.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  axes.push_back(cur);
  if (axes.size() != 4)
    throw Error(ErrorKind::BadParams, "actuator grid needs four axes a1,a2,a3,a4");
  std::array<std::vector<double>, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = parse_axis(axes[i]);
  return out;
}

template <class F>
int guarded(Streams s, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    s.err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

// Geometry checks map to the geometry exit code whatever the error kind.
inline void check_geometry(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    throw Error(ErrorKind::NoUpperRegion, std::string("geometry: ") + e.detail());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_dof(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    JointCounts c{o.n_links, o.n_joints,
                  o.freedoms.empty() ? std::vector<int>(static_cast<std::size_t>(std::max(o.n_joints, 0)), 1)
                                     : o.freedoms};
    try {
      c.validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::BadParams, e.detail());
    }
    nlohmann::ordered_json j;
    j["n_links"] = c.n_links;
    j["n_joints"] = c.n_joints;
    j["mobility"] = mobility(c);
    detail::print_kv(o, s, j);
    return kOk;
  });
}

inline int cmd_synth(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    const auto p = validate_params(o.r1, o.r2, o.r3);
    const auto d = dimensionalize(p, o.r3_mm);
    const auto m = mic(p);
    nlohmann::ordered_json j;
    j["D"] = d.d;
    j["l0"] = d.l0;
    j["l1"] = d.l1;
    j["l2"] = d.l2;
    j["r_mic"] = m.r_mic;
    j["y_mic"] = m.y_mic;
    detail::print_kv(o, s, j);
    return kOk;
  });
}

inline int cmd_chart(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    if (o.kind != "workspace" && o.kind != "lci")
      throw Error(ErrorKind::BadParams, "chart kind must be workspace or lci");
    const auto cfg = detail::load(o);
    const FiveBarGeometry g = cfg.robot.head_geom();
    MicResult m;
    detail::check_geometry([&] {
      g.validate();
      m = mic(g);
    });
    const GridSpec spec = detail::parse_chart_grid(o.grid, g);
    const BranchSelector br = detail::parse_branch(o.branch);
    const bool with_lci = o.kind == "lci";
    const ChartGrid c = with_lci ? lci_chart(g, spec, br) : workspace_mask(g, spec);

    Table t;
    t.columns = {"x_mm", "y_mm", "in_workspace"};
    if (with_lci) t.columns.push_back("lci");
    double lo = 1.0, hi = 0.0;
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) {
        std::vector<Cell> row{c.x(i), c.y(j), c.inside(i, j)};
        if (with_lci) {
          if (c.inside(i, j)) {
            row.emplace_back(c.value(i, j));
            lo = std::min(lo, c.value(i, j));
            hi = std::max(hi, c.value(i, j));
          } else {
            row.emplace_back(std::monostate{});
          }
        }
        t.add(std::move(row));
      }

    RunReport r;
    r.command = o.argv;
    r.input_digest = detail::digest(o, cfg.canonical);
    r.checks.push_back({"r_mic", m.r_mic, true});
    r.checks.push_back({"y_mic", m.y_mic, true});
    r.checks.push_back({"mic_inscribes", circle_inscribes(g, m.y_mic, m.r_mic),
                        circle_inscribes(g, m.y_mic, m.r_mic)});
    if (with_lci) {
      r.checks.push_back({"lci_in_unit_interval", lo >= 0 && hi <= 1, lo >= 0 && hi <= 1});
      const auto med = median_in_disk(c, m.y_mic, m.r_mic);
      r.checks.push_back({"median_lci_in_mic", med ? nlohmann::ordered_json(*med) : nlohmann::ordered_json(nullptr),
                          med.has_value()});
    }
    if (!o.svg.empty()) {
      detail::write_text(o.svg, chart_svg(c, with_lci));
      r.outputs.push_back(o.svg);
    }
    return detail::emit(o, s, t, r, kGeometryError);
  });
}

inline int cmd_fk(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    if (o.values.size() != 2) throw Error(ErrorKind::BadParams, "fk needs two angles");
    const auto cfg = detail::load(o);
    const bool head = o.mech == "head";
    if (!head && o.mech != "tail") throw Error(ErrorKind::BadParams, "--mech must be head or tail");
    const FiveBarGeometry g = head ? cfg.robot.head_geom() : cfg.robot.tail_geom();
    detail::check_geometry([&] { g.validate(); });
    const Sign a = detail::parse_assembly(
        o.branch, head ? cfg.robot.branches.head : cfg.robot.branches.tail);
    const auto st = fk(g, deg2rad(o.values[0]), deg2rad(o.values[1]), a);
    const auto f = is_singular(g, st, o.tol);
    nlohmann::ordered_json j;
    j["theta1_deg"] = rad2deg(st.theta1);
    j["theta2_deg"] = rad2deg(st.theta2);
    j["theta3_deg"] = rad2deg(st.theta3);
    j["theta4_deg"] = rad2deg(st.theta4);
    j["x_mm"] = st.endpoint.x();
    j["y_mm"] = st.endpoint.y();
    j["residual_mm"] = fivebar_residual(g, st).cwiseAbs().maxCoeff();
    j["gain"] = f.gain;
    j["loss"] = f.loss;
    detail::print_kv(o, s, j);
    return kOk;
  });
}

inline int cmd_ik(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    if (o.values.size() != 2) throw Error(ErrorKind::BadParams, "ik needs a point x,y");
    const auto cfg = detail::load(o);
    const bool head = o.mech == "head";
    if (!head && o.mech != "tail") throw Error(ErrorKind::BadParams, "--mech must be head or tail");
    const FiveBarGeometry g = head ? cfg.robot.head_geom() : cfg.robot.tail_geom();
    detail::check_geometry([&] { g.validate(); });
    const Vec2 p(o.values[0], o.values[1]);
    const auto st = ik_state(g, p, detail::parse_branch(o.branch));
    const auto f = is_singular(g, st, o.tol);
    const double e1 = std::abs((p - left_elbow(g, st.theta1)).norm() - g.l2);
    const double e2 = std::abs((p - right_elbow(g, st.theta4)).norm() - g.l3);
    nlohmann::ordered_json j;
    j["theta1_deg"] = rad2deg(st.theta1);
    j["theta4_deg"] = rad2deg(st.theta4);
    j["theta2_deg"] = rad2deg(st.theta2);
    j["theta3_deg"] = rad2deg(st.theta3);
    j["residual_mm"] = std::max(e1, e2);
    j["gain"] = f.gain;
    j["loss"] = f.loss;
    detail::print_kv(o, s, j);
    return kOk;
  });
}

inline int cmd_singularity_scan(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    const auto axes = detail::parse_actuator_grid(o.grid);
    const auto cfg = detail::load(o);
    detail::check_geometry([&] { cfg.robot.validate(); });
    Table t;
    t.columns = {"a1_deg", "a2_deg", "a3_deg", "a4_deg", "status", "det_K", "det_Kstar",
                 "gain", "loss", "factors"};
    int gains = 0, losses = 0, failed = 0;
    for (double a1 : axes[0])
      for (double a2 : axes[1])
        for (double a3 : axes[2])
          for (double a4 : axes[3]) {
            const ActuatorCommand c{deg2rad(a1), deg2rad(a2), deg2rad(a3), deg2rad(a4)};
            std::vector<Cell> row{a1, a2, a3, a4};
            try {
              const auto st = solve(cfg.robot, c);
              const auto rep = full_singularity(cfg.robot, st, o.tol);
              std::string names;
              for (const auto& n : rep.vanishing_factors) names += (names.empty() ? "" : ";") + n;
              for (const auto& n : rep.loss_blocks) names += (names.empty() ? "" : ";") + ("K:" + n);
              row.insert(row.end(), {std::string("ok"), rep.det_K, rep.det_Kstar, rep.gain,
                                     rep.loss, names});
              gains += rep.gain;
              losses += rep.loss;
            } catch (const Error& e) {
              ++failed;
              row.insert(row.end(), {std::string(to_string(e.kind())), std::monostate{},
                                     std::monostate{}, std::monostate{}, std::monostate{},
                                     std::monostate{}});
            }
            t.add(std::move(row));
          }
    RunReport r;
    r.command = o.argv;
    r.input_digest = detail::digest(o, cfg.canonical);
    r.checks.push_back({"points", static_cast<std::int64_t>(t.rows.size()), true});
    r.checks.push_back({"gain_rows", gains, true});
    r.checks.push_back({"loss_rows", losses, true});
    r.checks.push_back({"unsolved_rows", failed, true});
    return detail::emit(o, s, t, r, kInfeasible);
  });
}

inline Table trajectory_table(const Trajectory& tr, const RobotConfig& cfg) {
  Table t;
  t.columns = {"t_s", "a1_deg", "a2_deg", "a3_deg", "a4_deg"};
  for (int k = 1; k <= 4; ++k) {
    t.columns.push_back(fmt::format("foot{}_x_mm", k));
    t.columns.push_back(fmt::format("foot{}_y_mm", k));
  }
  for (const char* c : {"head_x_mm", "head_y_mm", "tail_x_mm", "tail_y_mm", "gain", "loss",
                        "leg_singular", "residual_mm"})
    t.columns.emplace_back(c);
  for (const auto& s : tr.samples) {
    std::vector<Cell> row{s.t, rad2deg(s.cmd.a1), rad2deg(s.cmd.a2), rad2deg(s.cmd.a3),
                          rad2deg(s.cmd.a4)};
    for (const auto& f : s.state.foot_tips) {
      row.emplace_back(f.x());
      row.emplace_back(f.y());
    }
    row.insert(row.end(), {s.state.head_point.x(), s.state.head_point.y(), s.state.tail_point.x(),
                           s.state.tail_point.y(), s.singularity.gain, s.singularity.loss,
                           static_cast<std::int64_t>(s.leg_singular),
                           max_loop_residual(cfg, s.state)});
    t.add(std::move(row));
  }
  return t;
}

inline int cmd_gait(const Options& o, Streams s) {
  return detail::guarded(s, [&] {
    auto cfg = detail::load(o);
    detail::check_geometry([&] { cfg.robot.validate(); });
    const std::string kind_name = o.kind.empty() ? cfg.file.kind : o.kind;
    const auto kind = parse_gait_kind(kind_name);
    if (!kind) throw Error(ErrorKind::BadParams, "unknown gait kind " + kind_name);
    GaitParams p = gait_params(cfg.file);
    if (o.amplitude) p.amplitude = deg2rad(*o.amplitude);
    const GaitProfile g = profile(*kind, cfg.robot, p);
    const double cycles = o.cycles.value_or(cfg.file.cycles);
    const double dt = o.dt.value_or(cfg.file.dt);
    const Trajectory tr = rollout(cfg.robot, g, cycles, dt, o.tol);

    RunReport r;
    r.command = o.argv;
    r.input_digest = detail::digest(o, cfg.canonical);
    const double res = tr.max_residual(cfg.robot);
    const int sing = tr.singular_count();
    r.checks.push_back({"samples", static_cast<std::int64_t>(tr.samples.size()), true});
    r.checks.push_back({"max_residual_mm", res, res < 1e-9});
    r.checks.push_back({"singular_samples", sing, sing == 0});
    const double span = cycles * g.period / dt;
    if (std::abs(cycles - std::round(cycles)) < 1e-12 && std::abs(span - std::round(span)) < 1e-6)
      r.checks.push_back({"foot_path_gap_mm", tr.foot_gap(), tr.foot_gap() < 1e-6});
    if (!o.svg.empty()) {
      detail::write_text(o.svg, trajectory_svg(tr));
      r.outputs.push_back(o.svg);
    }
    return detail::emit(o, s, trajectory_table(tr, cfg.robot), r, kInfeasible);
  });
}

}  // namespace lizard::io
