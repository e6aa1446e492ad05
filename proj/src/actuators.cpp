#include "softarm/actuators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace softarm {

double ForceGrid::at(std::size_t i, std::size_t j) const {
  return forces[i * pressure_axis.size() + j];
}

void ForceGrid::check() const {
  if (strain_axis.size() < 2 || pressure_axis.size() < 2)
    throw std::runtime_error("force grid needs at least 2 samples per axis");
  if (forces.size() != strain_axis.size() * pressure_axis.size())
    throw std::runtime_error("force grid body size does not match axes");
  auto ascending = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (!ascending(strain_axis)) throw std::runtime_error("force grid strain axis not ascending");
  if (!ascending(pressure_axis)) throw std::runtime_error("force grid pressure axis not ascending");
}

namespace {

// Index of the cell [axis[k], axis[k+1]] containing t (t must be inside the axis range).
std::size_t cell_index(const std::vector<double>& axis, double t) {
  auto it = std::upper_bound(axis.begin(), axis.end(), t);
  std::size_t k = static_cast<std::size_t>(it - axis.begin());
  if (k == 0) k = 1;
  if (k == axis.size()) k = axis.size() - 1;
  return k - 1;
}

double bilinear(const ForceGrid& g, double eps, double p) {
  const std::size_t i = cell_index(g.strain_axis, eps);
  const std::size_t j = cell_index(g.pressure_axis, p);
  const double u = (eps - g.strain_axis[i]) / (g.strain_axis[i + 1] - g.strain_axis[i]);
  const double v = (p - g.pressure_axis[j]) / (g.pressure_axis[j + 1] - g.pressure_axis[j]);
  return (1 - u) * (1 - v) * g.at(i, j) + u * (1 - v) * g.at(i + 1, j) +
         (1 - u) * v * g.at(i, j + 1) + u * v * g.at(i + 1, j + 1);
}

}  // namespace

double grid_force(const ForceGrid& grid, double eps, double p) {
  grid.check();
  if (eps < grid.strain_axis.front() || eps > grid.strain_axis.back())
    throw std::runtime_error("grid_force: strain outside table range");
  if (p < grid.pressure_axis.front() || p > grid.pressure_axis.back())
    throw std::runtime_error("grid_force: pressure outside table range");
  return bilinear(grid, eps, p);
}

double mckibben_force(double eps, double p, const McKibbenParams& mp, double max_pressure) {
  return -mp.spring_constant * eps -
         (p / max_pressure) * mp.max_force * (1.0 + eps / mp.free_strain);
}

double bellows_force(double eps, double p, const BellowsParams& bp) {
  return p * bp.effective_area - bp.spring_constant * eps;
}

double bending_moment(double kappa, double p, double stiffness, double reference_pressure) {
  return stiffness * (p / reference_pressure) * kappa;
}

ForceEval ActuatorModel::force(double eps, double p) const {
  ForceEval out;
  out.strain_out_of_range = !admissible.contains(eps);
  switch (kind) {
    case ActuatorKind::mckibben: {
      const double e = std::clamp(eps, -10.0, 10.0);
      out.force = mckibben_force(e, p, mckibben, max_pressure);
      break;
    }
    case ActuatorKind::bellows: {
      const double e = std::clamp(eps, -10.0, 10.0);
      out.force = bellows_force(e, p, bellows);
      break;
    }
    case ActuatorKind::grid: {
      const double e = std::clamp(eps, grid.strain_axis.front(), grid.strain_axis.back());
      const double pp = std::clamp(p, grid.pressure_axis.front(), grid.pressure_axis.back());
      out.force = bilinear(grid, e, pp);
      break;
    }
  }
  return out;
}

double ActuatorModel::moment(double kappa, double p) const {
  return bending_moment(kappa, p, bending_stiffness, reference_pressure);
}

ActuatorModel ActuatorModel::make_mckibben(double max_pressure, McKibbenParams mp) {
  ActuatorModel m;
  m.kind = ActuatorKind::mckibben;
  m.max_pressure = max_pressure;
  m.reference_pressure = max_pressure;
  m.mckibben = mp;
  m.admissible = {-0.35, 0.1};
  return m;
}

ActuatorModel ActuatorModel::make_bellows(double max_pressure, BellowsParams bp) {
  ActuatorModel m;
  m.kind = ActuatorKind::bellows;
  m.max_pressure = max_pressure;
  m.reference_pressure = max_pressure;
  m.bellows = bp;
  m.admissible = {-0.05, 1.0};
  return m;
}

ActuatorModel ActuatorModel::make_grid(ForceGrid grid, double max_pressure) {
  grid.check();
  ActuatorModel m;
  m.kind = ActuatorKind::grid;
  m.max_pressure = max_pressure;
  m.reference_pressure = max_pressure;
  m.admissible = {grid.strain_axis.front(), grid.strain_axis.back()};
  m.grid = std::move(grid);
  return m;
}

MonotonicityReport validate_model(const ActuatorModel& model,
                                  int strain_samples, int pressure_samples) {
  if (strain_samples < 2 || pressure_samples < 3)
    throw std::runtime_error("validate_model: need >=2 strain and >=3 pressure samples");
  MonotonicityReport report;
  const StrainRange r = model.admissible;
  for (int i = 0; i < strain_samples; ++i) {
    const double eps = r.lo + (r.hi - r.lo) * i / (strain_samples - 1);
    int direction = 0;
    double prev = model.force(eps, 0.0).force;
    bool violated = false;
    for (int j = 1; j < pressure_samples; ++j) {
      const double p = model.max_pressure * j / (pressure_samples - 1);
      const double f = model.force(eps, p).force;
      const double d = f - prev;
      if (std::abs(d) > 1e-12) {
        const int step = d > 0 ? 1 : -1;
        if (direction == 0) {
          direction = step;
        } else if (step != direction && !violated) {
          report.violations.push_back({eps, p});
          violated = true;
        }
      }
      prev = f;
    }
    report.signs.push_back({eps, direction});
  }
  return report;
}

}  // namespace softarm
