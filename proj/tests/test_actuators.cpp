#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "softarm/actuators.hpp"
#include "softarm/rng.hpp"

using namespace softarm;

TEST_CASE("mckibben surrogate fixed points") {
  const McKibbenParams mp;  // k=80, F=60, eps_free=0.25
  CHECK(mckibben_force(0.0, 0.0, mp, 100e3) == doctest::Approx(0.0));
  // Block force at zero strain and full pressure: the whole -F.
  CHECK(mckibben_force(0.0, 100e3, mp, 100e3) == doctest::Approx(-60.0));
  // At eps = -eps_free the pressure term vanishes: passive spring only.
  CHECK(mckibben_force(-0.25, 100e3, mp, 100e3) == doctest::Approx(20.0));
  CHECK(mckibben_force(-0.25, 37e3, mp, 100e3) == doctest::Approx(20.0));
  // Half pressure, slight extension: -80*0.05 - 0.5*60*(1.2) = -40.
  CHECK(mckibben_force(0.05, 50e3, mp, 100e3) == doctest::Approx(-40.0));
}

TEST_CASE("bellows surrogate fixed points") {
  const BellowsParams bp;  // A=1e-3, k=40
  CHECK(bellows_force(0.0, 50e3, bp) == doctest::Approx(50.0));
  CHECK(bellows_force(0.0, 0.0, bp) == doctest::Approx(0.0));
  CHECK(bellows_force(0.1, 0.0, bp) == doctest::Approx(-4.0));
  // Free extension at full pressure: eps = pA/k = 1.25.
  CHECK(bellows_force(1.25, 50e3, bp) == doctest::Approx(0.0));
}

TEST_CASE("bending moment is restoring and pressure-scaled") {
  CHECK(bending_moment(1.0, 50e3, -0.285, 50e3) == doctest::Approx(-0.285));
  CHECK(bending_moment(1.0, 25e3, -0.285, 50e3) == doctest::Approx(-0.1425));
  CHECK(bending_moment(-2.0, 50e3, -0.285, 50e3) == doctest::Approx(0.57));
  CHECK(bending_moment(1.0, 0.0, -0.285, 50e3) == doctest::Approx(0.0));
}

namespace {

// f(eps, p) = 3 eps + 2e-4 p + 1, sampled on a small grid: bilinear
// interpolation must reproduce the (bilinear) function everywhere inside.
ForceGrid linear_grid() {
  ForceGrid g;
  g.strain_axis = {-0.2, 0.0, 0.3, 0.5};
  g.pressure_axis = {0.0, 20e3, 50e3};
  for (double eps : g.strain_axis)
    for (double p : g.pressure_axis) g.forces.push_back(3.0 * eps + 2e-4 * p + 1.0);
  return g;
}

}  // namespace

TEST_CASE("grid interpolation is exact on bilinear data") {
  const ForceGrid g = linear_grid();
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double eps = rng.uniform(-0.2, 0.5);
    const double p = rng.uniform(0.0, 50e3);
    CHECK(grid_force(g, eps, p) ==
          doctest::Approx(3.0 * eps + 2e-4 * p + 1.0).epsilon(1e-12));
  }
  // Exact at the table nodes too.
  CHECK(grid_force(g, 0.3, 20e3) == doctest::Approx(3.0 * 0.3 + 2e-4 * 20e3 + 1.0));
}

TEST_CASE("grid lookup rejects out-of-table queries") {
  const ForceGrid g = linear_grid();
  CHECK_THROWS_WITH_AS(grid_force(g, 0.6, 10e3), doctest::Contains("strain"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(grid_force(g, 0.0, 60e3), doctest::Contains("pressure"),
                       std::runtime_error);
}

TEST_CASE("grid validation rejects malformed tables") {
  ForceGrid g = linear_grid();
  g.strain_axis[1] = -0.3;  // not ascending
  CHECK_THROWS_AS(g.check(), std::runtime_error);
  ForceGrid g2 = linear_grid();
  g2.forces.pop_back();
  CHECK_THROWS_AS(g2.check(), std::runtime_error);
  ForceGrid g3;
  g3.strain_axis = {0.0};
  g3.pressure_axis = {0.0, 1.0};
  g3.forces = {1.0, 2.0};
  CHECK_THROWS_AS(g3.check(), std::runtime_error);
}

TEST_CASE("default families pass the monotonicity scan") {
  CHECK(validate_model(ActuatorModel::make_bellows(50e3)).ok());
  const MonotonicityReport mck = validate_model(ActuatorModel::make_mckibben(100e3));
  CHECK(mck.ok());
  // The McKibben direction flips across strains (contraction side pushes back),
  // but never along a fixed-strain pressure line.
  bool has_up = false, has_down = false;
  for (const auto& s : mck.signs) {
    if (s.sign > 0) has_up = true;
    if (s.sign < 0) has_down = true;
  }
  CHECK(has_up);
  CHECK(has_down);
}

TEST_CASE("monotonicity scan flags an inverted cell") {
  ForceGrid g;
  g.strain_axis = {0.0, 0.5, 1.0};
  g.pressure_axis = {0.0, 50e3, 100e3};
  g.forces = {
      0.0, 1.0, 2.0,   // eps = 0.0: increasing
      0.0, 5.0, 3.0,   // eps = 0.5: reverses after p = 50 kPa
      0.0, 1.0, 2.0,   // eps = 1.0: increasing
  };
  const auto report = validate_model(ActuatorModel::make_grid(g, 100e3), 3, 3);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().strain == doctest::Approx(0.5));
  CHECK(report.violations.front().pressure == doctest::Approx(100e3));
}

TEST_CASE("monotone grids interpolate monotonically in pressure") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    ForceGrid g;
    g.strain_axis = {-0.1, 0.2, 0.4};
    g.pressure_axis = {0.0, 30e3, 70e3, 100e3};
    for (std::size_t i = 0; i < g.strain_axis.size(); ++i) {
      double f = rng.uniform(-10.0, 10.0);
      for (std::size_t j = 0; j < g.pressure_axis.size(); ++j) {
        g.forces.push_back(f);
        f += rng.uniform(0.1, 5.0);  // strictly increasing rows
      }
    }
    for (int line = 0; line < 5; ++line) {
      const double eps = rng.uniform(-0.1, 0.4);
      double prev = grid_force(g, eps, 0.0);
      for (int s = 1; s <= 20; ++s) {
        const double f = grid_force(g, eps, 100e3 * s / 20.0);
        CHECK(f >= prev - 1e-12);
        prev = f;
      }
    }
  }
}

TEST_CASE("model evaluation flags strains outside the admissible range") {
  const ActuatorModel mck = ActuatorModel::make_mckibben(100e3);
  CHECK_FALSE(mck.force(0.0, 50e3).strain_out_of_range);
  CHECK(mck.force(0.2, 50e3).strain_out_of_range);   // above 0.1
  CHECK(mck.force(-0.4, 50e3).strain_out_of_range);  // below -0.35
  // The guarded evaluation clamps runaway strains at +-10.
  CHECK(mck.force(25.0, 0.0).force == doctest::Approx(mckibben_force(10.0, 0.0, {}, 100e3)));

  const ActuatorModel bel = ActuatorModel::make_bellows(50e3);
  CHECK(bel.admissible.lo == doctest::Approx(-0.05));
  CHECK(bel.admissible.hi == doctest::Approx(1.0));
  CHECK(bel.force(1.2, 0.0).strain_out_of_range);
}

TEST_CASE("grid-backed model clamps to the table box") {
  const ActuatorModel m = ActuatorModel::make_grid(linear_grid(), 50e3);
  // Outside the strain axis: clamped to the edge value, flagged.
  const ForceEval e = m.force(0.9, 10e3);
  CHECK(e.strain_out_of_range);
  CHECK(e.force == doctest::Approx(grid_force(linear_grid(), 0.5, 10e3)));
}
