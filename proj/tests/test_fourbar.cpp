#include <catch_amalgamated.hpp>

#include "lizard/fourbar.hpp"
#include "oracle.hpp"

using namespace lizard;
using Catch::Approx;

namespace {

const FourBarGeometry kLeg{};

double angle_gap(double a, double b) { return std::abs(normalize_angle(a - b)); }

}  // namespace

TEST_CASE("parallelogram leg stays parallel", "[fourbar]") {
  for (double t : {kPi / 2, kPi / 3}) {
    const auto s = leg_fk(kLeg, t, kParallelBranch);
    CHECK(angle_gap(s.theta_lg13, t) < 1e-9);
    // Coupler parallel to the ground link.
    CHECK(angle_gap(s.theta_lg1 + s.theta_lg12, 0.0) < 1e-9);
    CHECK(leg_residual(kLeg, s).norm() < 1e-9);
    CHECK(leg_mode(kLeg, s) == LegMode::Open);
  }
}

TEST_CASE("open mode is parallel over a full sweep", "[fourbar]") {
  for (int d = -179; d <= 180; ++d) {
    if (d == 0 || d == 180) continue;  // the two flat, branch-merging poses
    const auto s = leg_fk(kLeg, deg2rad(d), LegMode::Open);
    CHECK(angle_gap(s.theta_lg13, s.theta_lg1) < 1e-9);
    CHECK_FALSE(leg_singular(kLeg, s));
  }
}

TEST_CASE("the parallelogram is singular when flat", "[fourbar]") {
  const auto s = leg_fk(kLeg, 1e-12, LegMode::Open);
  CHECK(leg_singular(kLeg, s));
}

TEST_CASE("perturbed leg matches a numeric root find", "[fourbar]") {
  const FourBarGeometry g(45, 51, 45, 50);
  const double t = kPi / 2;
  const auto roots = oracle::torus_roots([&](double a, double b) {
    return leg_residual(g, {t, a - t, b, Vec2::Zero()});
  });
  REQUIRE(roots.size() == 2);
  for (Sign br : {Sign::Plus, Sign::Minus}) {
    const auto s = leg_fk(g, t, br);
    bool hit = false;
    for (const auto& r : roots)
      if (angle_gap(s.theta_lg1 + s.theta_lg12, r(0)) < 1e-6 && angle_gap(s.theta_lg13, r(1)) < 1e-6)
        hit = true;
    CHECK(hit);
  }
}

TEST_CASE("leg_fk matches the root finder on random geometries", "[fourbar]") {
  int checked = 0;
  for (int n = 0; n < 150; ++n) {
    const FourBarGeometry g(oracle::uniform(20, 60), oracle::uniform(20, 60), oracle::uniform(20, 60),
                            oracle::uniform(20, 60));
    const double t = oracle::uniform(-kPi, kPi);
    std::vector<FourBarState> closed;
    for (Sign br : {Sign::Plus, Sign::Minus}) {
      try {
        closed.push_back(leg_fk(g, t, br));
      } catch (const Error&) {
      }
    }
    const auto roots = oracle::torus_roots([&](double a, double b) {
      return leg_residual(g, {t, a - t, b, Vec2::Zero()});
    });
    REQUIRE(roots.size() == closed.size());
    for (const auto& s : closed) {
      CHECK(leg_residual(g, s).norm() < 1e-9);
      bool hit = false;
      for (const auto& r : roots)
        if (angle_gap(s.theta_lg1 + s.theta_lg12, r(0)) < 1e-6 && angle_gap(s.theta_lg13, r(1)) < 1e-6)
          hit = true;
      CHECK(hit);
    }
    checked += !closed.empty();
  }
  CHECK(checked > 50);
}

TEST_CASE("unreachable leg input", "[fourbar]") {
  const FourBarGeometry g(10, 10, 10, 100);
  try {
    leg_fk(g, 0.3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoAssembly);
  }
}

TEST_CASE("leg singularity condition", "[fourbar]") {
  CHECK(leg_singular(kLeg, {0.5, 0.2, 0.7, Vec2::Zero()}));
  CHECK(leg_singular(kLeg, {0.5, kPi + 0.2, 0.7, Vec2::Zero()}));
  CHECK_FALSE(leg_singular(kLeg, {kPi / 2, 0.0, 0.0, Vec2::Zero()}));
}

TEST_CASE("leg velocity matrices", "[fourbar]") {
  for (int n = 0; n < 200; ++n) {
    const FourBarGeometry g(oracle::uniform(30, 60), oracle::uniform(30, 60), oracle::uniform(30, 60),
                            oracle::uniform(30, 60));
    FourBarState s;
    try {
      s = leg_fk(g, oracle::uniform(-kPi, kPi), n % 2 ? Sign::Plus : Sign::Minus);
    } catch (const Error&) {
      continue;
    }
    const auto j = leg_jacobians(g, s);
    CHECK(j.Kstar.determinant() == Approx(leg_det_kstar_closed(g, s)).margin(1e-9));

    auto with = [&](int which) {
      return [=](double v) {
        FourBarState t = s;
        (which == 1 ? t.theta_lg1 : which == 2 ? t.theta_lg12 : t.theta_lg13) = v;
        return Vec2(leg_residual(g, t));
      };
    };
    const Vec2 d12 = oracle::central_diff(with(2), s.theta_lg12);
    const Vec2 d13 = oracle::central_diff(with(3), s.theta_lg13);
    const Vec2 d1 = oracle::central_diff(with(1), s.theta_lg1);
    CHECK((j.Kstar.col(0) - d13).norm() < 1e-6 * 60);
    CHECK((j.Kstar.col(1) - d12).norm() < 1e-6 * 60);
    CHECK((j.K.col(0) - d12).norm() < 1e-6 * 60);
    // Moving the input carries the coupler with it.
    CHECK((j.K.col(0) + j.K.col(1) - d1).norm() < 1e-6 * 60);
  }
}

TEST_CASE("foot tip extends the output link", "[fourbar]") {
  FourBarGeometry g = kLeg;
  g.toe = 5;
  const auto s = leg_fk(g, kPi / 2, LegMode::Open);
  CHECK(s.foot_tip.x() == Approx(50).margin(1e-9));
  CHECK(s.foot_tip.y() == Approx(50).margin(1e-9));
}

TEST_CASE("grashof classification", "[fourbar]") {
  CHECK(kLeg.is_grashof());
  CHECK(kLeg.is_parallelogram());
  CHECK_FALSE(FourBarGeometry(10, 60, 20, 30).is_grashof());
}
