#pragma once

#include <Eigen/Dense>
#include <vector>

#include "softarm/convex_hull.hpp"
#include "softarm/planar.hpp"

// Exact small-scale QP: nearest point of a convex hull (in vertex form) to a
// query, via Wolfe's minimum-norm-point method over the shifted vertex set.
// Works for any affine rank of the vertex set, so degenerate hulls need no
// special casing.

namespace softarm {

// Nearest point of conv(points) to the origin.
Eigen::Vector3d min_norm_point(const std::vector<Eigen::Vector3d>& points);

// min over convex combinations c of |Vc - w|, V = the given vertices.
double distance_to_hull(const std::vector<Eigen::Vector3d>& vertices,
                        const Eigen::Vector3d& w);

double hull_distance(const WrenchHull& hull, const Wrench& w);

}  // namespace softarm
