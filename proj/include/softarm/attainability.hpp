#pragma once

#include <cstdint>
#include <vector>

#include "softarm/arm_model.hpp"
#include "softarm/convex_hull.hpp"

// Wrench-hull attainability analysis. The task shape is frozen, so mapping
// pressures to node reaction wrenches needs no equilibrium solving — that is
// the entire speed advantage over searching pressure space. This module
// deliberately has no dependency on the statics solver.
//
// Per node the requirement is w* = -q (the transported tip load, negated) and
// the attainable set is the image of the pressure box under the frozen-shape
// reaction map. Hulls of boundary (edge) samples stand in for the image; the
// absolute metric sums node distances |w* - hull|, the relative metric does
// the same after subtracting node 1 from both sides, which cancels any bias
// shared along the arm.

namespace softarm {

struct PressureSpace {
  std::vector<double> max_pressures;  // box [0, p_max] per actuator

  static PressureSpace of(const ArmDesign& design);
  std::size_t dims() const { return max_pressures.size(); }
  bool contains(const std::vector<double>& p) const;
};

struct Task {
  ArmShape shape;
  Wrench tip_load;
};

using WrenchSequence = std::vector<Wrench>;

// w*_k = -q_k at every node of the task shape.
WrenchSequence requirement_wrench_sequence(const Task& task);

// Node reaction wrenches at the frozen shape for one pressure vector.
WrenchSequence attainable_wrench_sequence(const ArmDesign& design, const ArmShape& shape,
                                          const std::vector<double>& pressures);

// All edges of the pressure box, `per_edge` evenly spaced samples each
// (M * 2^(M-1) edges; shared corners deduplicated).
std::vector<std::vector<double>> sample_pressure_edges(const PressureSpace& space,
                                                       int per_edge);

// Interior samples with Beta(alpha, beta)-distributed coordinates
// (bathtub-shaped for alpha = beta = 0.3: probes near faces and corners).
std::vector<std::vector<double>> sample_pressure_interior_beta(const PressureSpace& space,
                                                               int count, double alpha,
                                                               double beta,
                                                               std::uint64_t seed);

// Node hulls of the edge-sampled wrenches. Errors when a node's samples
// collapse to fewer than two distinct points (no actuation authority there).
std::vector<WrenchHull> build_absolute_hulls(const ArmDesign& design, const ArmShape& shape,
                                             const std::vector<std::vector<double>>& samples);

// Same, for the node-1-referenced differences. Node 1's hull is the origin
// point by construction; collapsed point sets are legitimate here.
std::vector<WrenchHull> build_relative_hulls(const ArmDesign& design, const ArmShape& shape,
                                             const std::vector<std::vector<double>>& samples);

struct AttainabilityReport {
  double absolute_unattainability = 0.0;  // sum of per-node hull distances
  double relative_unattainability = 0.0;
  std::vector<double> per_node_absolute;
  std::vector<double> per_node_relative;
  std::vector<WrenchHull> absolute_hulls;
  std::vector<WrenchHull> relative_hulls;
  bool attainable = false;  // both metrics under epsilon
  double epsilon = 0.0;     // the threshold actually used (per-node eps * N)
};

struct AnalyzeSettings {
  int per_edge = 5;
  double epsilon_per_node = 1e-6;
  bool keep_hulls = true;
};

AttainabilityReport analyze(const ArmDesign& design, const Task& task,
                            const AnalyzeSettings& settings = {});

}  // namespace softarm
