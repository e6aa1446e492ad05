#pragma once

#include <vector>

#include "softarm/arm_model.hpp"

// Damped-Newton equilibrium solver for the stacked 3N node balance system.
// Deterministic: identical inputs produce identical iterate sequences.

namespace softarm {

struct SolveSettings {
  double tolerance = 1e-6;    // convergence: max per-node residual norm
  int max_iterations = 200;
  double damping = 1e-3;      // initial Levenberg damping
  double fd_step = 1e-7;      // forward-difference Jacobian step (scaled by 1+|x|)
};

struct EquilibriumResult {
  ArmShape shape;
  double residual_norm = 0.0;  // max per-node residual norm at the final iterate
  int iterations = 0;
  bool converged = false;
  int clamp_warnings = 0;      // actuator evaluations outside the admissible strain
                               // range at the final shape
  int failed_continuation_step = -1;  // set by continuation_solve on failure
};

// Solves for the twist sequence balancing `tip_load` under `pressures`.
// `initial` defaults to the straight neutral shape. Non-convergence is
// reported through `converged`, never thrown; a NaN residual is a hard error
// naming the offending node.
EquilibriumResult solve_equilibrium(const ArmDesign& design,
                                    const std::vector<double>& pressures,
                                    const Wrench& tip_load,
                                    const ArmShape* initial = nullptr,
                                    const SolveSettings& settings = {});

// Ramps pressures and load linearly over `steps` increments, warm-starting
// each solve from the previous one. On failure the failing step index is
// recorded in the result.
EquilibriumResult continuation_solve(const ArmDesign& design,
                                     const std::vector<double>& pressures,
                                     const Wrench& tip_load, int steps,
                                     const SolveSettings& settings = {});

}  // namespace softarm
