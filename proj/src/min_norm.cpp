#include "softarm/min_norm.hpp"

#include <cmath>
#include <stdexcept>

namespace softarm {

namespace {

using Eigen::Vector3d;
using Eigen::VectorXd;

// Minimum-norm point of the affine hull of the corral: solve
//   [ G  1 ] [lambda]   [0]      G_ij = <p_i, p_j>
//   [ 1' 0 ] [  mu  ] = [1]
VectorXd affine_coefficients(const std::vector<Vector3d>& pts, const std::vector<int>& corral) {
  const int k = static_cast<int>(corral.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) A(i, j) = pts[corral[i]].dot(pts[corral[j]]);
    A(i, k) = 1.0;
    A(k, i) = 1.0;
  }
  b[k] = 1.0;
  // Least-squares solve tolerates a transiently ill-conditioned Gram system.
  return A.completeOrthogonalDecomposition().solve(b).head(k);
}

}  // namespace

Eigen::Vector3d min_norm_point(const std::vector<Eigen::Vector3d>& points) {
  if (points.empty()) throw std::runtime_error("min_norm_point: empty point set");
  const int n = static_cast<int>(points.size());

  // Start from the smallest-norm vertex.
  int start = 0;
  for (int i = 1; i < n; ++i)
    if (points[i].squaredNorm() < points[start].squaredNorm()) start = i;

  std::vector<int> corral{start};
  VectorXd coeff = VectorXd::Ones(1);
  Vector3d x = points[start];

  for (int iter = 0; iter < 200; ++iter) {
    // Most improving vertex: the support minimizer of <x, p>.
    int j = 0;
    double bestdot = points[0].dot(x);
    for (int i = 1; i < n; ++i) {
      const double d = points[i].dot(x);
      if (d < bestdot) { bestdot = d; j = i; }
    }
    const double gap = x.squaredNorm() - bestdot;  // duality gap (>= 0 at optimum: 0)
    if (gap <= 1e-13 * (1.0 + x.squaredNorm())) break;
    bool already = false;
    for (int c : corral)
      if (c == j) { already = true; break; }
    if (already) break;

    corral.push_back(j);
    VectorXd alpha(corral.size());
    alpha.head(coeff.size()) = coeff;
    alpha[corral.size() - 1] = 0.0;

    // Pull the affine minimizer back into the simplex, dropping blockers.
    for (int inner = 0; inner < 64; ++inner) {
      VectorXd lambda = affine_coefficients(points, corral);
      if (lambda.minCoeff() >= -1e-12) {
        coeff = lambda.cwiseMax(0.0);
        coeff /= coeff.sum();
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < lambda.size(); ++i)
        if (lambda[i] < alpha[i])
          theta = std::min(theta, alpha[i] / (alpha[i] - lambda[i]));
      alpha += theta * (lambda - alpha);
      // Remove one vanished coordinate (smallest) to keep the corral affinely independent.
      int drop = -1;
      double small = 1e-10;
      for (int i = 0; i < alpha.size(); ++i)
        if (alpha[i] <= small) { small = alpha[i]; drop = i; }
      if (drop < 0) {  // numerical fallback: drop the most negative lambda
        int worst = 0;
        for (int i = 1; i < lambda.size(); ++i)
          if (lambda[i] < lambda[worst]) worst = i;
        drop = worst;
      }
      corral.erase(corral.begin() + drop);
      VectorXd na(corral.size());
      for (int i = 0, t = 0; i < alpha.size(); ++i)
        if (i != drop) na[t++] = alpha[i];
      na = na.cwiseMax(0.0);
      na /= na.sum();
      alpha = na;
      coeff = alpha;
    }

    x.setZero();
    for (std::size_t i = 0; i < corral.size(); ++i) x += coeff[i] * points[corral[i]];
  }
  return x;
}

double distance_to_hull(const std::vector<Eigen::Vector3d>& vertices,
                        const Eigen::Vector3d& w) {
  std::vector<Vector3d> shifted;
  shifted.reserve(vertices.size());
  for (const auto& v : vertices) shifted.push_back(v - w);
  return min_norm_point(shifted).norm();
}

double hull_distance(const WrenchHull& hull, const Wrench& w) {
  return distance_to_hull(hull.vertices, to_vector(w));
}

}  // namespace softarm
