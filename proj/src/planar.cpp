#include "softarm/planar.hpp"

#include <cmath>

namespace softarm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin(t)/t and (1-cos(t))/t with series fallbacks near zero.
double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

double verc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return t / 2.0 - t * t2 / 24.0 + t2 * t2 * t / 720.0;
  }
  return (1.0 - std::cos(t)) / t;
}

}  // namespace

double wrap_angle(double t) {
  double r = std::remainder(t, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Pose compose(const Pose& a, const Pose& b) {
  const double c = std::cos(a.theta), s = std::sin(a.theta);
  Pose out;
  out.x = a.x + c * b.x - s * b.y;
  out.y = a.y + s * b.x + c * b.y;
  out.theta = wrap_angle(a.theta + b.theta);
  return out;
}

Pose inverse(const Pose& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  Pose out;
  out.x = -(c * g.x + s * g.y);
  out.y = -(-s * g.x + c * g.y);
  out.theta = wrap_angle(-g.theta);
  return out;
}

Eigen::Matrix3d pose_matrix(const Pose& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  Eigen::Matrix3d m;
  m << c, -s, g.x,
       s,  c, g.y,
       0,  0, 1;
  return m;
}

Eigen::Matrix3d twist_matrix(const Twist& xi) {
  Eigen::Matrix3d m;
  m << 0, -xi.kappa, xi.l,
       xi.kappa, 0, xi.gamma,
       0, 0, 0;
  return m;
}

Pose exp_twist(const Twist& xi, double scale) {
  const double phi = xi.kappa * scale;
  const double a = sinc(phi), b = verc(phi);
  Pose out;
  out.x = scale * (a * xi.l - b * xi.gamma);
  out.y = scale * (b * xi.l + a * xi.gamma);
  out.theta = wrap_angle(phi);
  return out;
}

Twist log_pose(const Pose& g) {
  const double phi = g.theta;
  const double a = sinc(phi), b = verc(phi);
  const double det = a * a + b * b;  // == 2(1-cos phi)/phi^2, positive on (-pi, pi]
  Twist out;
  out.l = (a * g.x + b * g.y) / det;
  out.gamma = (-b * g.x + a * g.y) / det;
  out.kappa = phi;
  return out;
}

Twist adjoint_twist(const Pose& g, const Twist& xi) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  Twist out;
  out.l = c * xi.l - s * xi.gamma + g.y * xi.kappa;
  out.gamma = s * xi.l + c * xi.gamma - g.x * xi.kappa;
  out.kappa = xi.kappa;
  return out;
}

Twist adjoint_inverse_twist(const Pose& offset, const Twist& xi) {
  return adjoint_twist(inverse(offset), xi);
}

Wrench transport_wrench(const Pose& relative, const Wrench& w) {
  const double c = std::cos(relative.theta), s = std::sin(relative.theta);
  Wrench out;
  out.fx = c * w.fx - s * w.fy;
  out.fy = s * w.fx + c * w.fy;
  out.m = w.m + relative.x * out.fy - relative.y * out.fx;
  return out;
}

double pairing(const Wrench& w, const Twist& xi) {
  return w.fx * xi.l + w.fy * xi.gamma + w.m * xi.kappa;
}

std::vector<Pose> integrate_twists(const Pose& base, const std::vector<Twist>& twists) {
  const double n = static_cast<double>(twists.size());
  std::vector<Pose> poses;
  poses.reserve(twists.size() + 1);
  poses.push_back(base);
  for (const Twist& xi : twists) {
    poses.push_back(compose(poses.back(), exp_twist(xi, 1.0 / n)));
  }
  return poses;
}

}  // namespace softarm
