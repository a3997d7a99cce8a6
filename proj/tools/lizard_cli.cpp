// lizard: command-line front end for the linkage toolkit.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "lizard/io/commands.hpp"

namespace io = lizard::io;

int main(int argc, char** argv) {
  io::Options o;
  for (int i = 1; i < argc; ++i) o.argv.emplace_back(argv[i]);

  CLI::App app{"Planar linkage toolkit for a four-actuator lizard robot"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  app.add_option("--config", o.config, "INI configuration file (defaults built in)");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--grid", o.grid, "chart: NXxNY; singularity-scan: a1,a2,a3,a4 axes (v or lo:hi:n, deg)");
  app.add_option("--branch", o.branch, "fk: + or -; ik/chart: two elbow signs such as ++");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", o.tol, "singularity tolerance")->check(CLI::PositiveNumber);

  auto* dof = app.add_subcommand("dof", "mobility M = 3(N - 1 - j) + sum f");
  dof->add_option("n_links", o.n_links, "links, ground included")->required();
  dof->add_option("n_joints", o.n_joints, "joints")->required();
  dof->add_option("--freedoms", o.freedoms, "per-joint freedoms (default all 1)")->delimiter(',');

  auto* synth = app.add_subcommand("synth", "non-dimensional parameters to link lengths");
  synth->add_option("r1", o.r1)->required();
  synth->add_option("r2", o.r2)->required();
  synth->add_option("r3", o.r3)->required();
  synth->add_option("r3_mm", o.r3_mm, "physical R3 (half the actuator spacing), mm")->required();

  auto* chart = app.add_subcommand("chart", "workspace or LCI chart of the head five-bar");
  chart->add_option("kind", o.kind, "workspace or lci")->required();
  chart->add_option("--svg", o.svg, "also write an SVG heat map");

  auto* fk = app.add_subcommand("fk", "five-bar forward position");
  fk->add_option("angles", o.values, "theta1,theta4 in degrees")->required()->delimiter(',')->expected(2);
  fk->add_option("--mech", o.mech, "head or tail");

  auto* ik = app.add_subcommand("ik", "five-bar inverse position");
  ik->add_option("point", o.values, "x,y in mm")->required()->delimiter(',')->expected(2);
  ik->add_option("--mech", o.mech, "head or tail");

  auto* scan = app.add_subcommand("singularity-scan", "determinants over an actuator grid");

  auto* gait = app.add_subcommand("gait", "sample a gait through the coupled robot");
  gait->add_option("kind", o.kind, "walk, trot, turn-left or turn-right");
  gait->add_option("--cycles", o.cycles, "number of periods");
  gait->add_option("--dt", o.dt, "time step, s");
  gait->add_option("--amplitude", o.amplitude, "sweep amplitude, deg");
  gait->add_option("--svg", o.svg, "also write an SVG of the foot paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : io::kInputError;
  }
  o.format = format == "json" ? io::Format::Json : io::Format::Csv;

  io::Streams s{std::cout, std::cerr};
  try {
    if (*dof) return io::cmd_dof(o, s);
    if (*synth) return io::cmd_synth(o, s);
    if (*chart) return io::cmd_chart(o, s);
    if (*fk) return io::cmd_fk(o, s);
    if (*ik) return io::cmd_ik(o, s);
    if (*scan) return io::cmd_singularity_scan(o, s);
    if (*gait) return io::cmd_gait(o, s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io::kInputError;
  }
  return io::kInputError;
}
