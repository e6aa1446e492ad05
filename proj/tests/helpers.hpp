#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "softarm/arm_model.hpp"

// Shared fixtures and independent oracles for the test suite and benchmarks.
// The reference designs here mirror configs/designs/*.json; tests that need a
// design without touching the filesystem build them from these factories.

namespace softarm_test {

constexpr double kPi = 3.14159265358979323846;

inline softarm::ActuatorPlacement bellows_at(double offset) {
  softarm::ActuatorPlacement a;
  a.offset = offset;
  a.neutral_length = 0.5;
  a.model = softarm::ActuatorModel::make_bellows(50e3);
  return a;
}

inline softarm::ActuatorPlacement mckibben_at(double offset) {
  softarm::ActuatorPlacement a;
  a.offset = offset;
  a.neutral_length = 0.5;
  a.model = softarm::ActuatorModel::make_mckibben(100e3);
  return a;
}

inline softarm::ArmDesign antagonistic_design() {
  softarm::ArmDesign d;
  d.name = "antagonistic";
  d.actuators = {bellows_at(0.025), bellows_at(-0.025), mckibben_at(0.05),
                 mckibben_at(-0.05)};
  d.segment_count = 5;
  d.base_pose = {0.0, 0.0, kPi / 2.0};
  return d;
}

inline softarm::ArmDesign bellows_only_design() {
  softarm::ArmDesign d;
  d.name = "bellows_only";
  d.actuators = {bellows_at(0.025), bellows_at(-0.025)};
  d.segment_count = 5;
  d.base_pose = {0.0, 0.0, kPi / 2.0};
  return d;
}

inline softarm::ArmDesign mckibben_only_design() {
  softarm::ArmDesign d;
  d.name = "mckibben_only";
  d.actuators = {mckibben_at(0.05), mckibben_at(-0.05)};
  d.segment_count = 5;
  d.base_pose = {0.0, 0.0, kPi / 2.0};
  return d;
}

inline softarm::ArmShape neutral_shape(const softarm::ArmDesign& d) {
  std::vector<softarm::Twist> tw(static_cast<std::size_t>(d.segment_count),
                                 {d.mean_neutral_length(), 0.0, 0.0});
  return softarm::ArmShape::from_twists(d.base_pose, std::move(tw));
}

// Independent matrix exponential (scaling-and-squaring on the Taylor series);
// oracle for the closed-form planar exponential.
inline Eigen::Matrix3d expm(Eigen::Matrix3d a) {
  int squarings = 0;
  while (a.norm() > 0.25) {
    a *= 0.5;
    ++squarings;
  }
  Eigen::Matrix3d x = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= 24; ++k) {
    term = term * a / static_cast<double>(k);
    x += term;
  }
  for (int i = 0; i < squarings; ++i) x = x * x;
  return x;
}

// Exact distance from a query to a tetrahedron by enumerating every vertex,
// edge, and face projection; oracle for the minimum-norm-point QP.
inline double tetra_distance_brute(const std::vector<Eigen::Vector3d>& v,
                                   const Eigen::Vector3d& q) {
  double best = std::numeric_limits<double>::max();
  for (const auto& p : v) best = std::min(best, (q - p).norm());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Eigen::Vector3d d = v[j] - v[i];
      const double t = std::clamp((q - v[i]).dot(d) / d.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (q - (v[i] + t * d)).norm());
    }
  const int faces[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& f : faces) {
    const Eigen::Vector3d a = v[f[0]], b = v[f[1]], c = v[f[2]];
    Eigen::Matrix<double, 3, 2> m;
    m.col(0) = b - a;
    m.col(1) = c - a;
    const Eigen::Vector2d uv = (m.transpose() * m).ldlt().solve(m.transpose() * (q - a));
    if (uv[0] >= 0.0 && uv[1] >= 0.0 && uv[0] + uv[1] <= 1.0)
      best = std::min(best, (q - (a + m * uv)).norm());
  }
  // Interior test: q on the inner side of every face (inner = centroid side).
  const Eigen::Vector3d centroid = (v[0] + v[1] + v[2] + v[3]) / 4.0;
  bool inside = true;
  for (const auto& f : faces) {
    const Eigen::Vector3d a = v[f[0]];
    Eigen::Vector3d n = (v[f[1]] - a).cross(v[f[2]] - a);
    if (n.dot(centroid - a) > 0) n = -n;  // outward
    if (n.dot(q - a) > 0) {
      inside = false;
      break;
    }
  }
  return inside ? 0.0 : best;
}

}  // namespace softarm_test
