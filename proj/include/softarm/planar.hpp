#pragma once

#include <Eigen/Dense>
#include <vector>

// Planar rigid-body kernels for slender-arm kinematics and statics.
//
// Conventions used throughout the library:
//  - A pose is (x, y, theta) with theta kept in (-pi, pi].
//  - A body twist is (l, gamma, kappa): length rate along the body x axis,
//    shear rate along body y, and curvature (rotation rate). Its matrix form
//    is the standard planar skew form [[0, -kappa, l], [kappa, 0, gamma], [0, 0, 0]].
//  - Positive kappa bends counterclockwise, so a fiber offset at +r on the
//    body y axis shortens under positive curvature (its length component is
//    l - r*kappa after the frame change below).

namespace softarm {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct Twist {
  double l = 0.0;      // length component
  double gamma = 0.0;  // shear component
  double kappa = 0.0;  // curvature component
};

struct Wrench {
  double fx = 0.0;  // force along body x
  double fy = 0.0;  // force along body y
  double m = 0.0;   // moment about body z
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double t);

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& g);

// Homogeneous 3x3 matrix of a pose / matrix form of a twist (for oracles and tests).
Eigen::Matrix3d pose_matrix(const Pose& g);
Eigen::Matrix3d twist_matrix(const Twist& xi);

// Exponential map: pose reached by flowing along xi for `scale` (typically 1/n).
// Closed-form planar arc; series fallback keeps it smooth through kappa -> 0.
Pose exp_twist(const Twist& xi, double scale = 1.0);

// Logarithm: the twist whose unit-scale exponential is g. Defined for theta in (-pi, pi].
Twist log_pose(const Pose& g);

// Adjoint action of g on a twist, and its inverse: expresses a twist in a
// frame displaced by `offset`. For offset (0, r, 0) the length component
// becomes l - r*kappa and shear/curvature are unchanged.
Twist adjoint_twist(const Pose& g, const Twist& xi);
Twist adjoint_inverse_twist(const Pose& offset, const Twist& xi);

// Transports a wrench expressed in a distal frame into the local frame, where
// `relative` is the pose of the distal frame seen from the local one. Forces
// rotate; the moment picks up the lever-arm cross term. Dual to the adjoint:
// <transport(g, w), adjoint(g, xi)> == <w, xi> for all g, w, xi.
Wrench transport_wrench(const Pose& relative, const Wrench& w);

double pairing(const Wrench& w, const Twist& xi);

// Chains n segment exponentials: poses[0] = base, poses[k+1] = poses[k] *
// exp(twists[k] / n) with n = twists.size(). Returns n+1 poses.
std::vector<Pose> integrate_twists(const Pose& base, const std::vector<Twist>& twists);

inline Eigen::Vector3d to_vector(const Twist& xi) { return {xi.l, xi.gamma, xi.kappa}; }
inline Eigen::Vector3d to_vector(const Wrench& w) { return {w.fx, w.fy, w.m}; }
inline Twist twist_from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
inline Wrench wrench_from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

}  // namespace softarm
