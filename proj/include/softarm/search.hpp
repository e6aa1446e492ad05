#pragma once

#include <Eigen/Dense>
#include <vector>

#include "softarm/attainability.hpp"
#include "softarm/statics.hpp"

// Search-based attainability baseline: minimize the weighted shape error
// between the equilibrium shape at pressures p and the task shape, over the
// pressure box. Every objective evaluation is a full equilibrium solve, which
// is exactly why this path is slow and the hull analysis is not.

namespace softarm {

struct ShapeErrorWeights {
  // One 3x3 weight per non-base node (pose differences as (x, y, theta)).
  std::vector<Eigen::Matrix3d> node_weights;

  static ShapeErrorWeights identity(std::size_t n);
  static ShapeErrorWeights position_only(std::size_t n);
  static ShapeErrorWeights tip_only(std::size_t n);  // zeros except the tip node
};

// Sum over non-base nodes of e' W e, e = pose-difference vector of
// inverse(achieved_k) * target_k with the angle wrapped to (-pi, pi].
double shape_error(const ArmShape& achieved, const ArmShape& target,
                   const ShapeErrorWeights& weights);

struct SearchSettings {
  int starts = 5;                      // center + box corners, deterministic
  int max_evaluations_per_start = 400; // inner equilibrium solves per branch
  double stop_objective = 1e-9;        // early exit once a branch gets this low
  double initial_simplex = 0.25;       // in box-normalized coordinates
  bool use_gradient = false;           // finite-difference projected descent instead
  SolveSettings solver;
  int continuation_steps = 1;          // >1: ramped solves for stubborn evaluations
  int threads = 0;                     // 0 = library default for the start branches
};

struct SearchResult {
  double objective = 0.0;              // best shape error found
  std::vector<double> pressures;       // arg min
  ArmShape best_shape;                 // equilibrium shape at the best pressures
  long long evaluations = 0;           // total equilibrium solves across branches
  long long failed_solves = 0;         // evaluations scored +inf
  double seconds = 0.0;                // wall-clock for the whole search
};

SearchResult search_attainability(const ArmDesign& design, const Task& task,
                                  const ShapeErrorWeights& weights,
                                  const SearchSettings& settings = {});

}  // namespace softarm
