#include <catch_amalgamated.hpp>

#include "lizard/fivebar.hpp"
#include "oracle.hpp"

using namespace lizard;
using Catch::Approx;

namespace {

const FiveBarGeometry kHead{};
const double kSymT2 = std::acos(0.2);

// Coincident elbows: both proximal tips at (0, 20 sqrt 2).
const double kCoT1 = std::acos(1.0 / 3.0);
const double kCoT4 = kPi - std::acos(1.0 / 3.0);

double angle_gap(double a, double b) { return std::abs(normalize_angle(a - b)); }

}  // namespace

TEST_CASE("fk at the symmetric pose", "[fivebar]") {
  const auto s = fk(kHead, kPi / 2, kPi / 2, Sign::Plus);
  CHECK(s.theta2 == Approx(kSymT2).margin(1e-12));
  CHECK(s.theta3 == Approx(kPi - kSymT2).margin(1e-12));
  CHECK(s.theta2 == Approx(1.3694).margin(1e-4));
  CHECK(s.theta3 == Approx(1.7722).margin(1e-4));
  CHECK(s.endpoint.x() == Approx(0).margin(1e-12));
  CHECK(s.endpoint.y() > 0);
  CHECK(fivebar_residual(kHead, s).norm() < 1e-9);
}

TEST_CASE("fk opposite assembly mirrors the endpoint below the elbows", "[fivebar]") {
  const auto up = fk(kHead, kPi / 2, kPi / 2, Sign::Plus);
  const auto down = fk(kHead, kPi / 2, kPi / 2, Sign::Minus);
  CHECK(fivebar_residual(kHead, down).norm() < 1e-9);
  CHECK(down.endpoint.x() == Approx(0).margin(1e-12));
  // Reflection of the upper endpoint through the elbow line y = 30.
  CHECK(down.endpoint.y() == Approx(60 - up.endpoint.y()).margin(1e-12));
  CHECK(down.endpoint.y() < 0);
  CHECK(assembly_of(kHead, up) == Sign::Plus);
  CHECK(assembly_of(kHead, down) == Sign::Minus);
}

TEST_CASE("fk reports unreachable and fold-back inputs", "[fivebar]") {
  const FiveBarGeometry wide{60, 30, 20, 20, 30};
  // Both chains stretched outward: elbows 120 mm apart, distal reach 40 mm.
  try {
    fk(wide, kPi, 0.0);
    FAIL("expected NoAssembly");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoAssembly);
  }
  try {
    fk(kHead, kCoT1, kCoT4);
    FAIL("expected DegenerateDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDenominator);
  }
}

TEST_CASE("fk matches a brute-force root find over all assemblies", "[fivebar]") {
  for (int n = 0; n < 60; ++n) {
    const FiveBarGeometry g{oracle::uniform(10, 40), oracle::uniform(15, 50), oracle::uniform(30, 70),
                            oracle::uniform(30, 70), oracle::uniform(15, 50)};
    const double t1 = oracle::uniform(-kPi, kPi), t4 = oracle::uniform(-kPi, kPi);
    std::vector<FiveBarState> closed;
    for (Sign a : {Sign::Plus, Sign::Minus}) {
      try {
        closed.push_back(fk(g, t1, t4, a));
      } catch (const Error&) {
      }
    }
    const auto roots = oracle::torus_roots([&](double a, double b) {
      return fivebar_residual(g, {t1, a, b, t4, Vec2::Zero()});
    });
    REQUIRE(roots.size() == closed.size());
    for (const auto& r : roots) {
      bool hit = false;
      for (const auto& s : closed)
        if (angle_gap(s.theta2, r(0)) < 1e-6 && angle_gap(s.theta3, r(1)) < 1e-6) hit = true;
      CHECK(hit);
    }
  }
}

TEST_CASE("ik and fk round trip", "[fivebar]") {
  int checked = 0;
  for (int n = 0; n < 1000; ++n) {
    const double t1 = oracle::uniform(-kPi, kPi), t4 = oracle::uniform(-kPi, kPi);
    const Sign a = n % 2 ? Sign::Plus : Sign::Minus;
    FiveBarState s;
    try {
      s = fk(kHead, t1, t4, a);
    } catch (const Error&) {
      continue;
    }
    const BranchSelector mode = working_mode(kHead, s);
    const auto [r1, r4] = ik(kHead, s.endpoint, mode);
    CHECK(angle_gap(r1, t1) < 1e-9);
    CHECK(angle_gap(r4, t4) < 1e-9);
    const auto back = fk(kHead, r1, r4, assembly_of(kHead, s));
    CHECK((back.endpoint - s.endpoint).norm() < 1e-9);
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("ik satisfies both circle constraints", "[fivebar]") {
  for (BranchSelector b : {BranchSelector{Sign::Plus, Sign::Plus}, BranchSelector{Sign::Minus, Sign::Plus},
                           BranchSelector{Sign::Plus, Sign::Minus}, BranchSelector{Sign::Minus, Sign::Minus}}) {
    const Vec2 p(7.5, 52.0);
    const auto [t1, t4] = ik(kHead, p, b);
    CHECK((p - left_elbow(kHead, t1)).norm() == Approx(kHead.l2).margin(1e-9));
    CHECK((p - right_elbow(kHead, t4)).norm() == Approx(kHead.l3).margin(1e-9));
    const auto s = ik_state(kHead, p, b);
    CHECK(working_mode(kHead, s) == b);
  }
}

TEST_CASE("ik on the outer boundary stretches the left chain", "[fivebar]") {
  const double phi = 1.1;
  const Vec2 p = kHead.left_base() + (kHead.l1 + kHead.l2) * dir(phi);
  const auto s = ik_state(kHead, p, {Sign::Plus, Sign::Plus});
  CHECK(angle_gap(s.theta1, s.theta2) < 1e-6);
  CHECK(angle_gap(s.theta1, phi) < 1e-6);
}

TEST_CASE("ik at the centre of the inscribed circle is symmetric", "[fivebar]") {
  const Vec2 p(0.0, std::sqrt(2400.0));
  const auto [t1, t4] = ik(kHead, p, {Sign::Plus, Sign::Plus});
  CHECK(t1 == Approx(kPi - t4).margin(1e-12));
  const auto s = ik_state(kHead, p);
  CHECK(fivebar_residual(kHead, s).norm() < 1e-9);
}

TEST_CASE("ik rejects points outside the annuli", "[fivebar]") {
  for (const Vec2& p : {Vec2(200, 0), Vec2(0, 0), Vec2(-9, 1)}) {
    try {
      ik(kHead, p);
      FAIL("expected OutOfWorkspace");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfWorkspace);
    }
  }
}

TEST_CASE("passive matrix at the symmetric pose", "[fivebar]") {
  const auto s = fk(kHead, kPi / 2, kPi / 2, Sign::Plus);
  const auto j = jacobians(kHead, s);
  const double p3 = kPi - s.theta3;
  CHECK(j.Kstar(0, 0) == Approx(-50 * std::sin(s.theta2)));
  CHECK(j.Kstar(0, 1) == Approx(-50 * std::sin(p3)));
  CHECK(j.Kstar(1, 0) == Approx(50 * std::cos(s.theta2)));
  CHECK(j.Kstar(1, 1) == Approx(-50 * std::cos(p3)));
}

TEST_CASE("velocity matrices match finite differences of the loop", "[fivebar]") {
  for (int n = 0; n < 200; ++n) {
    FiveBarState s;
    try {
      s = fk(kHead, oracle::uniform(-kPi, kPi), oracle::uniform(-kPi, kPi),
             n % 2 ? Sign::Plus : Sign::Minus);
    } catch (const Error&) {
      continue;
    }
    const auto j = jacobians(kHead, s);
    auto loop = [&](int which) {
      return [=](double v) {
        FiveBarState t = s;
        (which == 1 ? t.theta1 : which == 2 ? t.theta2 : which == 3 ? t.theta3 : t.theta4) = v;
        return Vec2(fivebar_residual(kHead, t));
      };
    };
    // Right-chain columns are taken with respect to pi - theta.
    const Vec2 d1 = oracle::central_diff(loop(1), s.theta1);
    const Vec2 d4 = -oracle::central_diff(loop(4), s.theta4);
    const Vec2 d2 = oracle::central_diff(loop(2), s.theta2);
    const Vec2 d3 = -oracle::central_diff(loop(3), s.theta3);
    const double scale = 50.0;
    CHECK((j.K.col(0) - d1).norm() < 1e-6 * scale);
    CHECK((j.K.col(1) - d4).norm() < 1e-6 * scale);
    CHECK((j.Kstar.col(0) - d2).norm() < 1e-6 * scale);
    CHECK((j.Kstar.col(1) - d3).norm() < 1e-6 * scale);
    CHECK(j.Kstar.determinant() == Approx(det_kstar_closed(kHead, s)).margin(1e-9));
    CHECK(j.K.determinant() == Approx(det_k_closed(kHead, s)).margin(1e-9));
  }
}

TEST_CASE("coincident distal links are gain singular", "[fivebar]") {
  // theta2 = theta3 is the state the mirrored convention writes as theta2 + theta3 = pi.
  for (double phi : {0.3, 1.4, 2.9}) {
    const Vec2 e = left_elbow(kHead, kCoT1);
    FiveBarState s{kCoT1, phi, phi, kCoT4, e + 50 * dir(phi)};
    REQUIRE(fivebar_residual(kHead, s).norm() < 1e-9);
    const auto f = is_singular(kHead, s);
    CHECK(f.gain);
    CHECK_FALSE(f.loss);
    CHECK(std::abs(det_kstar_closed(kHead, s)) < 1e-9);
  }
}

TEST_CASE("the symmetric pose is not gain singular", "[fivebar]") {
  const auto s = fk(kHead, kPi / 2, kPi / 2, Sign::Plus);
  const auto f = is_singular(kHead, s);
  CHECK_FALSE(f.gain);
  CHECK(std::abs(std::sin(s.theta2 + (kPi - s.theta3))) == Approx(std::sin(2 * kSymT2)));
  // theta1 = theta4 makes the active matrix singular.
  CHECK(f.loss);
}

TEST_CASE("a stretched left chain is not gain singular", "[fivebar]") {
  const Vec2 p = kHead.left_base() + 80.0 * dir(1.2);
  const auto s = ik_state(kHead, p);
  CHECK(angle_gap(s.theta1, s.theta2) < 1e-6);
  CHECK_FALSE(is_singular(kHead, s).gain);
  // The boundary shows up in the endpoint velocity map instead.
  const Vec2 u = p - left_elbow(kHead, s.theta1);
  const Vec2 de = kHead.l1 * Vec2(-std::sin(s.theta1), std::cos(s.theta1));
  CHECK(std::abs(u.dot(de)) < 1e-6 * kHead.l1 * kHead.l2);
}
