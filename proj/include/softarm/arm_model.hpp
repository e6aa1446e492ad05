#pragma once

#include <string>
#include <vector>

#include "softarm/actuators.hpp"
#include "softarm/planar.hpp"

// A planar pneumatic arm as a chain of N piecewise-constant body twists driven
// by M length-uniform actuators mounted at lateral offsets. Reaction statics:
// at every node the actuators' axial forces, the shear penalty, and the
// pressure-scaled bending stiffness produce a body wrench
//   a = ( sum_a f_a,  -penalty * sum_a gamma_a,  -sum_a r_a f_a + sum_a tau_a )
// which must cancel the tip-load wrench transported to that node.

namespace softarm {

struct ActuatorPlacement {
  double offset = 0.0;          // r, signed lateral mount position (m)
  double neutral_length = 0.5;  // resting length (m)
  ActuatorModel model;
};

struct ArmDesign {
  std::string name;
  std::vector<ActuatorPlacement> actuators;
  int segment_count = 5;  // N
  Pose base_pose;
  double shear_penalty = 1e5;  // N per unit shear

  std::size_t actuator_count() const { return actuators.size(); }
  std::vector<double> max_pressures() const;
  double mean_neutral_length() const;

  // Non-fatal design smells (e.g. no two distinct offsets => no moment authority).
  std::vector<std::string> warnings() const;
};

// Twist sequence plus the node poses derived from it. Construct through
// from_twists so the poses can never go stale.
struct ArmShape {
  std::vector<Twist> twists;  // N entries
  std::vector<Pose> poses;    // N+1 entries, poses[0] = base

  static ArmShape from_twists(const Pose& base, std::vector<Twist> twists);
  std::size_t nodes() const { return twists.size(); }
  const Pose& tip() const { return poses.back(); }
};

// Per-actuator strains at node k: the centerline twist is pushed through the
// offset frame change, then eps = (l_a - neutral) / neutral.
std::vector<double> actuator_strains(const ArmDesign& design, const ArmShape& shape,
                                     std::size_t node);

// Body reaction wrench at node k for the given per-actuator pressures.
// `strain_warnings`, when non-null, accumulates how many actuator evaluations
// sat outside their admissible strain range.
Wrench reaction_wrench(const ArmDesign& design, const ArmShape& shape,
                       const std::vector<double>& pressures, std::size_t node,
                       int* strain_warnings = nullptr);

// Tip-load wrench transported to every node (N entries, node k uses poses[k]).
std::vector<Wrench> load_wrench_sequence(const ArmShape& shape, const Wrench& tip_load);

// Node-wise force balance defects a_k + q_k (zero at equilibrium).
std::vector<Wrench> residual(const ArmDesign& design, const ArmShape& shape,
                             const std::vector<double>& pressures, const Wrench& tip_load,
                             int* strain_warnings = nullptr);

}  // namespace softarm
