#include <doctest.h>

#include <cmath>

#include "softarm/search.hpp"
#include "helpers.hpp"

using namespace softarm;
using namespace softarm_test;

TEST_CASE("shape error: zero on itself, quadratic in a unit offset") {
  const ArmDesign d = antagonistic_design();
  const ArmShape s = neutral_shape(d);
  const auto w = ShapeErrorWeights::identity(s.nodes());
  CHECK(shape_error(s, s, w) == 0.0);

  // Shift the target base one meter sideways: every node moves by exactly 1,
  // so the identity-weighted error is N * 1^2.
  Pose shifted = d.base_pose;
  shifted.x += 1.0;
  const ArmShape t = ArmShape::from_twists(shifted, s.twists);
  CHECK(shape_error(s, t, w) == doctest::Approx(5.0));

  ShapeErrorWeights zero = w;
  for (auto& m : zero.node_weights) m.setZero();
  CHECK(shape_error(s, t, zero) == 0.0);
}

TEST_CASE("tip-only weights ignore interior nodes") {
  const ArmDesign d = antagonistic_design();
  const ArmShape s = neutral_shape(d);
  auto bent = s.twists;
  bent[1].kappa += 0.5;  // disturb an interior node; everything after it moves
  const ArmShape t = ArmShape::from_twists(d.base_pose, bent);

  const double full = shape_error(s, t, ShapeErrorWeights::identity(s.nodes()));
  const double tip = shape_error(s, t, ShapeErrorWeights::tip_only(s.nodes()));
  CHECK(full > tip);
  CHECK(tip > 0.0);

  // A pure tip-angle change is invisible to position-only weights when the
  // last node's position is pinned; compare against identity to verify the
  // theta column is really dropped.
  const double pos = shape_error(s, t, ShapeErrorWeights::position_only(s.nodes()));
  CHECK(pos < full);
}

TEST_CASE("weights factory arity") {
  CHECK(ShapeErrorWeights::identity(3).node_weights.size() == 3);
  CHECK(ShapeErrorWeights::position_only(4).node_weights.size() == 4);
  const auto tip = ShapeErrorWeights::tip_only(4);
  CHECK(tip.node_weights[0].isZero());
  CHECK(tip.node_weights[3].isIdentity());
}

TEST_CASE("search recovers a reachable equilibrium shape") {
  const ArmDesign d = antagonistic_design();
  const std::vector<double> p_true{20e3, 5e3, 10e3, 55e3};
  const Wrench load{0.5, -2.0, 0.1};
  const auto eq = solve_equilibrium(d, p_true, load);
  REQUIRE(eq.converged);

  SearchSettings settings;
  settings.starts = 5;
  settings.max_evaluations_per_start = 400;
  settings.stop_objective = 1e-10;
  const Task task{eq.shape, load};
  const auto res =
      search_attainability(d, task, ShapeErrorWeights::identity(eq.shape.nodes()), settings);
  CHECK(res.objective < 1e-4);
  REQUIRE(res.pressures.size() == 4);
  CHECK(PressureSpace::of(d).contains(res.pressures));
  CHECK(res.evaluations > 0);
  // objective < 1e-4 is a squared error, so coordinates can be off by 1e-2.
  for (std::size_t k = 0; k < res.best_shape.poses.size(); ++k) {
    CHECK(std::abs(res.best_shape.poses[k].x - eq.shape.poses[k].x) < 1e-2);
    CHECK(std::abs(res.best_shape.poses[k].y - eq.shape.poses[k].y) < 1e-2);
  }
}

TEST_CASE("search is deterministic, also across thread counts") {
  const ArmDesign d = bellows_only_design();
  const auto eq = solve_equilibrium(d, {35e3, 12e3}, Wrench{0.0, -1.0, 0.0});
  REQUIRE(eq.converged);
  const Task task{eq.shape, Wrench{0.0, -1.0, 0.0}};
  const auto w = ShapeErrorWeights::identity(eq.shape.nodes());

  SearchSettings settings;
  settings.starts = 3;
  settings.max_evaluations_per_start = 120;
  settings.threads = 1;
  const auto a = search_attainability(d, task, w, settings);
  const auto b = search_attainability(d, task, w, settings);
  CHECK(a.objective == b.objective);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.pressures == b.pressures);

  settings.threads = 2;
  const auto c = search_attainability(d, task, w, settings);
  CHECK(a.objective == c.objective);
  CHECK(a.pressures == c.pressures);
  CHECK(a.evaluations == c.evaluations);
}

TEST_CASE("zero weights end the search immediately at zero") {
  const ArmDesign d = bellows_only_design();
  const Task task{neutral_shape(d), Wrench{}};
  ShapeErrorWeights w = ShapeErrorWeights::identity(task.shape.nodes());
  for (auto& m : w.node_weights) m.setZero();
  SearchSettings settings;
  settings.starts = 2;
  const auto res = search_attainability(d, task, w, settings);
  CHECK(res.objective == 0.0);
  // The early-exit threshold fires on the first start's first evaluation.
  CHECK(res.evaluations < 2 * settings.max_evaluations_per_start);
}

TEST_CASE("an impossible task keeps a finite best attempt") {
  const ArmDesign d = antagonistic_design();
  // No pressure can hold a kilonewton sideways: the search must still return
  // its best attempt with a clearly positive objective.
  const Task task{neutral_shape(d), Wrench{0.0, -1000.0, 0.0}};
  SearchSettings settings;
  settings.starts = 3;
  settings.max_evaluations_per_start = 150;
  settings.continuation_steps = 5;
  const auto res =
      search_attainability(d, task, ShapeErrorWeights::identity(task.shape.nodes()), settings);
  CHECK(std::isfinite(res.objective));
  CHECK(res.objective > 1e-4);
  CHECK(PressureSpace::of(d).contains(res.pressures));
}

TEST_CASE("gradient mode also recovers a reachable shape") {
  const ArmDesign d = bellows_only_design();
  const auto eq = solve_equilibrium(d, {28e3, 9e3}, Wrench{});
  REQUIRE(eq.converged);
  SearchSettings settings;
  settings.use_gradient = true;
  settings.starts = 3;
  settings.max_evaluations_per_start = 300;
  const auto res = search_attainability(d, Task{eq.shape, Wrench{}},
                                        ShapeErrorWeights::identity(eq.shape.nodes()),
                                        settings);
  CHECK(res.objective < 1e-4);
}
