#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

// Convex hulls of small 3D point clouds (typically a few hundred edge-sampled
// wrenches). Point sets are frequently rank-deficient here — the shear
// component of a frozen-shape wrench map is pressure-independent — so the
// builder detects the affine rank and produces a point, segment, planar
// polygon, or full polytope accordingly.

namespace softarm {

struct WrenchHull {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> facets;  // rank 3: triangles, outward-oriented
  std::vector<std::array<int, 2>> edges;   // rank 2: polygon edges (vertices CCW in-plane)
  int degenerate_rank = 3;                 // affine rank of the input points (0..3)

  double diameter() const;  // max pairwise vertex distance
  // True when the point is inside or on the hull within `tol` (half-space /
  // subspace test, independent of the QP distance).
  bool contains(const Eigen::Vector3d& p, double tol) const;
};

// Rank-adaptive hull. Accepts any non-empty point set, duplicates included.
WrenchHull build_hull(const std::vector<Eigen::Vector3d>& points);

}  // namespace softarm
