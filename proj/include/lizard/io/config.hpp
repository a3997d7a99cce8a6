#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "lizard/gait.hpp"
#include "lizard/robot.hpp"

namespace lizard::io {

/// Configuration in file units (mm, degrees). Kept separate from
/// RobotConfig so that parse -> write -> parse is exact.
struct ConfigFile {
  // [links]
  std::array<double, 20> l = LinkSet{}.l;
  double lg1 = 45, lg10 = 50, lg12 = 50, lg13 = 45;
  double toe = 0;
  // [angles]
  std::array<double, 4> c{90, 90, 90, 90};
  double joint_range = 35;
  double splay = 12;
  // [legs]
  double tail_y = 0;
  std::array<std::array<double, 3>, 4> mounts = default_mounts(LinkSet{}.l, 0.0);
  // [branches]
  std::string head = "-";
  std::string tail = "+";
  std::string body = "+";
  std::string legs = "open";
  // [gait]
  std::string kind = "walk";
  double amplitude = 0;        // 0 selects the per-kind default
  double inner_amplitude = 10;
  double period = 2;
  double duty = 0;             // 0 selects the per-kind default
  double cycles = 2;
  double dt = 0.01;

  static std::array<std::array<double, 3>, 4> default_mounts(const std::array<double, 20>& l,
                                                             double tail_y) {
    LinkSet k;
    k.l = l;
    const auto p = RobotConfig::default_leg_mounts(k, 20.0, tail_y);
    std::array<std::array<double, 3>, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = {p[i].x, p[i].y, rad2deg(p[i].heading)};
    return out;
  }

  bool operator==(const ConfigFile&) const = default;
};

inline Sign parse_sign(const std::string& s, const char* key) {
  if (s == "+" || s == "plus") return Sign::Plus;
  if (s == "-" || s == "minus") return Sign::Minus;
  throw Error(ErrorKind::Config, std::string("branches.") + key + " must be + or -");
}

inline RobotConfig to_robot(const ConfigFile& f) {
  RobotConfig r;
  r.links.l = f.l;
  r.links.leg = {f.lg1, f.lg12, f.lg13, f.lg10};
  for (std::size_t i = 0; i < 4; ++i) r.links.c[i] = deg2rad(f.c[i]);
  r.toe = f.toe;
  r.joint_range = deg2rad(f.joint_range);
  r.splay = deg2rad(f.splay);
  r.tail_y = f.tail_y;
  for (std::size_t i = 0; i < 4; ++i)
    r.leg_mounts[i] = {f.mounts[i][0], f.mounts[i][1], deg2rad(f.mounts[i][2])};
  r.branches.head = parse_sign(f.head, "head");
  r.branches.tail = parse_sign(f.tail, "tail");
  r.branches.left_body = parse_sign(f.body, "body");
  if (f.legs == "open") r.branches.legs = LegMode::Open;
  else if (f.legs == "crossed") r.branches.legs = LegMode::Crossed;
  else throw Error(ErrorKind::Config, "branches.legs must be open or crossed");
  try {
    r.validate_values();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.detail());
  }
  return r;
}

inline GaitKind gait_kind(const ConfigFile& f) {
  const auto k = parse_gait_kind(f.kind);
  if (!k) throw Error(ErrorKind::Config, "gait.kind must be walk, trot, turn-left or turn-right");
  return *k;
}

inline GaitParams gait_params(const ConfigFile& f) {
  GaitParams p;
  if (f.amplitude > 0) p.amplitude = deg2rad(f.amplitude);
  p.inner_amplitude = deg2rad(f.inner_amplitude);
  p.period = f.period;
  if (f.duty > 0) p.duty = f.duty;
  return p;
}

namespace detail {

// Fixed key order per section; shared by the reader and the writer.
struct Field {
  std::string key;
  double* num = nullptr;
  std::string* text = nullptr;
};

inline std::vector<std::pair<std::string, std::vector<Field>>> layout(ConfigFile& f) {
  std::vector<Field> links;
  for (std::size_t i = 0; i < f.l.size(); ++i) links.push_back({"l" + std::to_string(i), &f.l[i]});
  links.push_back({"lg1", &f.lg1});
  links.push_back({"lg10", &f.lg10});
  links.push_back({"lg12", &f.lg12});
  links.push_back({"lg13", &f.lg13});
  links.push_back({"toe", &f.toe});

  std::vector<Field> angles;
  for (std::size_t i = 0; i < 4; ++i) angles.push_back({"c" + std::to_string(i + 1), &f.c[i]});
  angles.push_back({"joint_range", &f.joint_range});
  angles.push_back({"splay", &f.splay});

  std::vector<Field> legs{{"tail_y", &f.tail_y}};
  static constexpr const char* kParts[3] = {"x", "y", "heading"};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t p = 0; p < 3; ++p)
      legs.push_back({"leg" + std::to_string(i + 1) + "_" + kParts[p], &f.mounts[i][p]});

  std::vector<Field> branches{{"head", nullptr, &f.head},
                              {"tail", nullptr, &f.tail},
                              {"body", nullptr, &f.body},
                              {"legs", nullptr, &f.legs}};

  std::vector<Field> gait{{"kind", nullptr, &f.kind},       {"amplitude", &f.amplitude},
                          {"inner_amplitude", &f.inner_amplitude}, {"period", &f.period},
                          {"duty", &f.duty},                {"cycles", &f.cycles},
                          {"dt", &f.dt}};

  return {{"links", links}, {"angles", angles}, {"legs", legs}, {"branches", branches},
          {"gait", gait}};
}

inline double parse_number(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, where + ": not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size() || !std::isfinite(v))
    throw Error(ErrorKind::Config, where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace detail

/// Parses INI text. Unknown sections or keys are rejected; absent keys keep
/// their defaults. Leg mounts not given explicitly follow the link lengths.
inline ConfigFile parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.message() +
                                       " (line " + std::to_string(e.line()) + ")");
  }

  ConfigFile f;
  auto sections = detail::layout(f);
  // Empty sections never reach the tree; check headers directly.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] != '[') continue;
    const auto e = line.find(']', b);
    const std::string name = line.substr(b + 1, e == std::string::npos ? e : e - b - 1);
    if (std::none_of(sections.begin(), sections.end(), [&](const auto& s) { return s.first == name; }))
      throw Error(ErrorKind::Config, "unknown section [" + name + "]");
  }
  bool mounts_given = false;
  for (const auto& [name, body] : tree) {
    if (body.data().size() && body.empty())
      throw Error(ErrorKind::Config, "key outside any section: " + name);
    auto sec = std::find_if(sections.begin(), sections.end(),
                            [&](const auto& s) { return s.first == name; });
    if (sec == sections.end()) throw Error(ErrorKind::Config, "unknown section [" + name + "]");
    for (const auto& [key, val] : body) {
      auto fld = std::find_if(sec->second.begin(), sec->second.end(),
                              [&](const detail::Field& x) { return x.key == key; });
      if (fld == sec->second.end())
        throw Error(ErrorKind::Config, "unknown key " + name + "." + key);
      const std::string raw = val.data();
      if (fld->num) *fld->num = detail::parse_number(raw, name + "." + key);
      else *fld->text = raw;
      if (name == "legs" && key != "tail_y") mounts_given = true;
    }
  }
  if (!mounts_given) f.mounts = ConfigFile::default_mounts(f.l, f.tail_y);
  return f;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Writes every key in a fixed order with round-trip precision.
inline std::string serialize_config(ConfigFile f) {
  std::string out;
  bool first = true;
  for (const auto& [name, fields] : detail::layout(f)) {
    if (!first) out += '\n';
    first = false;
    out += fmt::format("[{}]\n", name);
    for (const auto& x : fields) {
      if (x.num) out += fmt::format("{} = {}\n", x.key, *x.num);
      else out += fmt::format("{} = {}\n", x.key, *x.text);
    }
  }
  return out;
}

}  // namespace lizard::io
