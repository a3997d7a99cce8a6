#include <catch_amalgamated.hpp>

#include "lizard/core.hpp"
#include "lizard/fivebar.hpp"
#include "oracle.hpp"

using namespace lizard;
using Catch::Approx;

TEST_CASE("mobility of the body sub-system and of a leg", "[core]") {
  CHECK(mobility(uniform_joints(13, 16)) == 4);
  CHECK(mobility(uniform_joints(4, 4)) == 1);
  CHECK(mobility(uniform_joints(2, 1)) == 1);
}

TEST_CASE("mobility can be non-positive and is linear in the freedoms", "[core]") {
  CHECK(mobility(uniform_joints(3, 3)) == 0);
  CHECK(mobility(uniform_joints(5, 7)) == -2);
  JointCounts a = uniform_joints(6, 7);
  JointCounts b = a;
  b.joint_freedoms[2] = 2;
  b.joint_freedoms[5] = 3;
  CHECK(mobility(b) - mobility(a) == 3);
}

TEST_CASE("invalid joint counts are rejected", "[core]") {
  CHECK_THROWS_AS(mobility({1, 1, {1}}), Error);
  CHECK_THROWS_AS(mobility({4, 0, {}}), Error);
  CHECK_THROWS_AS(mobility({4, 2, {1}}), Error);
  CHECK_THROWS_AS(mobility({4, 2, {1, 0}}), Error);
}

TEST_CASE("link set defaults", "[core]") {
  LinkSet k;
  CHECK(k[0] == 20);
  CHECK(k[10] == 135);
  CHECK(k[16] == 30);
  CHECK(k[17] == 45);
  CHECK(k.leg.lg1 == 45);
  CHECK(k.leg.lg12 == 50);
  CHECK(k.C(3) == Approx(kPi / 2));
  k[4] = -1;
  CHECK_THROWS_AS(k.validate(), Error);
}

namespace {

JointState head_state(double t1, double t2, double t3, double t4) {
  JointState s;
  s.theta(1) = t1;
  s.theta(2) = t2;
  s.theta(3) = t3;
  s.theta(4) = t4;
  return s;
}

}  // namespace

TEST_CASE("head loop closes at a solved configuration and opens when perturbed", "[core]") {
  LinkSet k;
  const FiveBarState f = fk(FiveBarGeometry{}, 1.2, 2.1, Sign::Plus);
  JointState s = head_state(f.theta1, f.theta2, f.theta3, f.theta4);
  CHECK(loop_residual(k, s, LoopId::Head).max_abs() < 1e-9);
  s.theta(2) += 0.1;
  CHECK(loop_residual(k, s, LoopId::Head).max_abs() > 1e-3);
}

TEST_CASE("symmetric head pose closes and agrees with a numeric root find", "[core]") {
  LinkSet k;
  const double t2 = std::acos(0.2);
  const JointState s = head_state(kPi / 2, t2, kPi - t2, kPi / 2);
  CHECK(loop_residual(k, s, LoopId::Head).max_abs() < 1e-9);

  const auto roots = oracle::torus_roots([&](double a, double b) {
    return loop_residual(k, head_state(kPi / 2, a, b, kPi / 2), LoopId::Head).values;
  });
  bool found = false;
  for (const auto& r : roots)
    if (std::abs(r(0) - t2) < 1e-6 && std::abs(r(1) - (kPi - t2)) < 1e-6) found = true;
  CHECK(found);
}

TEST_CASE("loop residuals are unchanged by whole turns", "[core]") {
  LinkSet k;
  JointState s;
  for (int i = 1; i <= 16; ++i) s.theta(i) = 0.37 * i - 2.0;
  for (auto& g : s.legs) g = {0.4, -0.7, 1.1};
  s.s_left = 3.0;
  s.s_right = -2.0;
  for (LoopId id : kAllLoops) {
    JointState t = s;
    for (int i = 1; i <= 16; ++i) t.theta(i) += 2 * kPi * (i % 3 - 1);
    for (auto& g : t.legs) {
      g.input -= 2 * kPi;
      g.output += 4 * kPi;
    }
    CHECK((loop_residual(k, s, id).values - loop_residual(k, t, id).values).norm() < 1e-10);
  }
}

TEST_CASE("normalize_angle maps into (-pi, pi]", "[core]") {
  CHECK(normalize_angle(kPi) == Approx(kPi));
  CHECK(normalize_angle(-kPi) == Approx(kPi));
  CHECK(normalize_angle(3 * kPi / 2) == Approx(-kPi / 2));
  CHECK(normalize_angle(0.25) == 0.25);
}
