#pragma once

#include <string>
#include <vector>

// Axial force and bending-moment surrogates for the three supported actuator
// families. The analytic models follow
//   McKibben:  f = -k*eps - (p/p_max)*F*(1 + eps/eps_free)
//   bellows:   f =  p*A_eff - k*eps
// with f > 0 meaning the actuator pushes its endpoints apart (extension) and
// f < 0 meaning it pulls (contraction). The tabulated family interpolates a
// measured force grid bilinearly. Every family also carries a pressure-scaled
// bending stiffness: tau = K * (p / p_ref) * kappa with K < 0 restoring.

namespace softarm {

enum class ActuatorKind { mckibben, bellows, grid };

struct McKibbenParams {
  double spring_constant = 80.0;  // N per unit strain
  double max_force = 60.0;        // N, block force at p_max and zero strain
  double free_strain = 0.25;      // contraction at which the pressure term vanishes
};

struct BellowsParams {
  double effective_area = 1e-3;   // m^2
  double spring_constant = 40.0;  // N per unit strain
};

// Rectilinear force table f(strain, pressure), bilinear interpolation.
struct ForceGrid {
  std::vector<double> strain_axis;    // ascending
  std::vector<double> pressure_axis;  // ascending
  std::vector<double> forces;         // row-major: forces[i*pressure_axis.size()+j]

  double at(std::size_t i, std::size_t j) const;
  void check() const;  // throws on malformed axes/sizes
};

// Strict lookup: throws naming the violated axis when (eps, p) leaves the box.
double grid_force(const ForceGrid& grid, double eps, double p);

double mckibben_force(double eps, double p, const McKibbenParams& mp, double max_pressure);
double bellows_force(double eps, double p, const BellowsParams& bp);
double bending_moment(double kappa, double p, double stiffness, double reference_pressure);

struct StrainRange {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double eps) const { return eps >= lo && eps <= hi; }
};

struct ForceEval {
  double force = 0.0;
  bool strain_out_of_range = false;  // outside the admissible range (reported, not fatal)
};

struct ActuatorModel {
  ActuatorKind kind = ActuatorKind::bellows;
  double max_pressure = 50e3;        // Pa, upper edge of the admissible pressure box
  double bending_stiffness = -0.285; // N*m^2 (negative: restoring)
  double reference_pressure = 50e3;  // Pa, the p_ref in the bending model
  StrainRange admissible{-0.05, 1.0};
  McKibbenParams mckibben;
  BellowsParams bellows;
  ForceGrid grid;  // used when kind == grid

  // Solver-facing evaluation: analytic formulas are evaluated at the true
  // strain (guarded to |eps| <= 10 so stray iterates cannot run away); grid
  // models clamp to the table box. Leaving the admissible range only sets the
  // flag so equilibria beyond the surrogate's trust region stay solvable.
  ForceEval force(double eps, double p) const;
  double moment(double kappa, double p) const;

  static ActuatorModel make_mckibben(double max_pressure = 100e3, McKibbenParams mp = {});
  static ActuatorModel make_bellows(double max_pressure = 50e3, BellowsParams bp = {});
  static ActuatorModel make_grid(ForceGrid grid, double max_pressure);
};

// Monotonicity-in-pressure scan used to vet user-supplied models.
struct MonotonicityReport {
  struct StrainSign {
    double strain = 0.0;
    int sign = 0;  // +1 increasing, -1 decreasing, 0 flat
  };
  struct Violation {
    double strain = 0.0;
    double pressure = 0.0;  // where the force reversed direction
  };
  std::vector<StrainSign> signs;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

MonotonicityReport validate_model(const ActuatorModel& model,
                                  int strain_samples = 11,
                                  int pressure_samples = 11);

}  // namespace softarm
