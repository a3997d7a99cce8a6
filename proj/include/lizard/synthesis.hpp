#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "lizard/fivebar.hpp"

namespace lizard {

inline constexpr double kDesignSum = 0.9;

struct NonDimParams {
  double r1 = 0.3;
  double r2 = 0.5;
  double r3 = 0.1;
};

/// Checks the design-space constraints. The simplex sum is checked first,
/// then the per-parameter bounds, then the assembly inequality.
inline NonDimParams validate_params(double r1, double r2, double r3) {
  if (!(std::abs(r1 + r2 + r3 - kDesignSum) <= 1e-12))
    throw Error(ErrorKind::SimplexViolation, "r1 + r2 + r3 must equal 0.9");
  if (!(r1 > 0 && r1 < kDesignSum)) throw Error(ErrorKind::RangeViolation, "need 0 < r1 < 0.9");
  if (!(r2 > 0 && r2 < kDesignSum)) throw Error(ErrorKind::RangeViolation, "need 0 < r2 < 0.9");
  if (!(r3 > 0 && r3 < kDesignSum / 2))
    throw Error(ErrorKind::RangeViolation, "need 0 < r3 < 0.45");
  if (r1 + r2 < r3) throw Error(ErrorKind::AssemblyViolation, "need r1 + r2 >= r3");
  return {r1, r2, r3};
}

struct Dimensioned {
  double d = 0.0;  // dimensional factor, mm
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;

  FiveBarGeometry geometry() const { return {l0, l1, l2, l2, l1}; }
};

/// Scales to millimetres given the physical half base length R3.
inline Dimensioned dimensionalize(const NonDimParams& p, double r3_physical) {
  if (!(r3_physical > 0)) throw Error(ErrorKind::BadParams, "R3 must be positive");
  const double d = r3_physical / p.r3;
  return {d, 2 * r3_physical, p.r1 * d, p.r2 * d};
}

/// Inverse of dimensionalize: D = (R1 + R2 + R3) / 0.9 and r_i = R_i / D.
inline NonDimParams normalize(double l1, double l2, double r3_physical) {
  const double d = (l1 + l2 + r3_physical) / kDesignSum;
  return {l1 / d, l2 / d, r3_physical / d};
}

// ---------------------------------------------------------------------------
// Charts

struct GridSpec {
  double x_min = -80.0;
  double x_max = 80.0;
  double y_min = 0.0;
  double y_max = 80.0;
  int nx = 200;
  int ny = 200;

  void validate() const {
    if (nx < 2 || ny < 2) throw Error(ErrorKind::BadParams, "grid needs at least 2x2 samples");
    if (!(x_max > x_min && y_max > y_min))
      throw Error(ErrorKind::BadParams, "grid ranges must be non-empty");
  }
};

/// Upper region only: [-(l1+l2), l1+l2] x [0, l1+l2].
inline GridSpec default_grid(const FiveBarGeometry& g, int nx = 200, int ny = 200) {
  const double reach = g.l1 + g.l2;
  return {-reach, reach, 0.0, reach, nx, ny};
}

/// Samples stored x-fastest: index = j * nx + i.
struct ChartGrid {
  GridSpec spec;
  std::vector<double> values;
  std::vector<char> mask;

  // Endpoint-weighted so a range symmetric about 0 gives exactly mirrored x.
  double x(int i) const {
    return ((spec.nx - 1 - i) * spec.x_min + i * spec.x_max) / (spec.nx - 1);
  }
  double y(int j) const {
    return ((spec.ny - 1 - j) * spec.y_min + j * spec.y_max) / (spec.ny - 1);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(spec.nx) +
           static_cast<std::size_t>(i);
  }
  double value(int i, int j) const { return values[index(i, j)]; }
  bool inside(int i, int j) const { return mask[index(i, j)] != 0; }
};

/// Reachable by both chains: inside the outer and outside the inner circle
/// around each base pivot. Boundaries count as inside.
inline bool in_workspace(const FiveBarGeometry& g, const Vec2& p) {
  const double eps = 1e-9 * (g.l1 + g.l2 + g.l3 + g.l4);
  const double d1 = (p - g.left_base()).norm();
  const double d2 = (p - g.right_base()).norm();
  return d1 <= g.l1 + g.l2 + eps && d1 >= std::abs(g.l1 - g.l2) - eps &&
         d2 <= g.l4 + g.l3 + eps && d2 >= std::abs(g.l4 - g.l3) - eps;
}

inline ChartGrid workspace_mask(const FiveBarGeometry& g, const GridSpec& spec) {
  spec.validate();
  ChartGrid c{spec, {}, {}};
  const auto n = static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(spec.ny);
  c.values.assign(n, 0.0);
  c.mask.assign(n, 0);
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) c.mask[c.index(i, j)] = in_workspace(g, {c.x(i), c.y(j)});
  return c;
}

// ---------------------------------------------------------------------------
// Maximal inscribed circle

struct MicResult {
  double r_mic = 0.0;
  double y_mic = 0.0;
};

inline MicResult mic(const FiveBarGeometry& g) {
  const double diff = std::abs(g.l1 - g.l2);
  const double r = (g.l1 + g.l2 - diff) / 2;
  const double big = g.l1 + g.l2 + diff;
  const double radicand = big * big / 4 - (g.l0 / 2) * (g.l0 / 2);
  if (radicand < 0) throw Error(ErrorKind::NoUpperRegion, "no upper workspace region");
  return {r, std::sqrt(radicand)};
}

inline MicResult mic(const NonDimParams& p) {
  return mic(FiveBarGeometry{2 * p.r3, p.r1, p.r2, p.r2, p.r1});
}

/// True when every sample of a square grid of pitch `step` that falls inside
/// the circle lies in the workspace.
inline bool circle_inscribes(const FiveBarGeometry& g, double yc, double r, double step = 0.5) {
  const int n = static_cast<int>(std::ceil(r / step));
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i) {
      const Vec2 p(i * step, yc + j * step);
      if ((p - Vec2(0.0, yc)).norm() <= r && !in_workspace(g, p)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Local conditioning index

/// Endpoint velocity Jacobian J with pdot = J * (theta1dot, theta4dot).
/// From |P - E_i| = const: A pdot = B thetadot, rows of A are (P - E_i)^T and
/// B = diag((P - E_i) . dE_i/dtheta_i).
inline Mat2 endpoint_jacobian(const FiveBarGeometry& g, const Vec2& p, double theta1,
                              double theta4) {
  const Vec2 u = p - left_elbow(g, theta1);
  const Vec2 v = p - right_elbow(g, theta4);
  Mat2 A;
  A << u.transpose(), v.transpose();
  const double b1 = u.dot(g.l1 * Vec2(-std::sin(theta1), std::cos(theta1)));
  const double b4 = v.dot(g.l4 * Vec2(-std::sin(theta4), std::cos(theta4)));
  const double scale_a = u.norm() * v.norm();
  if (std::abs(A.determinant()) < 1e-10 * scale_a || std::abs(b1) < 1e-10 * g.l1 * g.l2 ||
      std::abs(b4) < 1e-10 * g.l4 * g.l3)
    throw Error(ErrorKind::SingularHere, "endpoint Jacobian is singular");
  Mat2 B = Mat2::Zero();
  B(0, 0) = b1;
  B(1, 1) = b4;
  return A.inverse() * B;
}

/// Inverse spectral condition number of a 2x2 matrix.
inline double inverse_condition(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  const auto s = svd.singularValues();
  if (!(s(0) > 0)) return 0.0;
  return s(1) / s(0);
}

inline double lci(const FiveBarGeometry& g, const Vec2& p, BranchSelector branch = {}) {
  if (!in_workspace(g, p)) throw Error(ErrorKind::OutOfWorkspace, "endpoint outside workspace");
  const auto [t1, t4] = ik(g, p, branch);
  return inverse_condition(endpoint_jacobian(g, p, t1, t4));
}

/// LCI over the workspace samples; 0 outside the mask and at singular points.
inline ChartGrid lci_chart(const FiveBarGeometry& g, const GridSpec& spec,
                           BranchSelector branch = {}) {
  ChartGrid c = workspace_mask(g, spec);
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      const auto k = c.index(i, j);
      if (!c.mask[k]) continue;
      try {
        c.values[k] = lci(g, {c.x(i), c.y(j)}, branch);
      } catch (const Error&) {
        c.values[k] = 0.0;
      }
    }
  return c;
}

/// Median chart value over workspace samples inside the disk (0, yc, r).
inline std::optional<double> median_in_disk(const ChartGrid& c, double yc, double r) {
  std::vector<double> v;
  for (int j = 0; j < c.spec.ny; ++j)
    for (int i = 0; i < c.spec.nx; ++i)
      if (c.inside(i, j) && std::hypot(c.x(i), c.y(j) - yc) <= r) v.push_back(c.value(i, j));
  if (v.empty()) return std::nullopt;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return (lo + hi) / 2;
}

}  // namespace lizard
