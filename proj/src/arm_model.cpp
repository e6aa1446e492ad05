#include "softarm/arm_model.hpp"

#include <cmath>
#include <stdexcept>

namespace softarm {

std::vector<double> ArmDesign::max_pressures() const {
  std::vector<double> out;
  out.reserve(actuators.size());
  for (const auto& a : actuators) out.push_back(a.model.max_pressure);
  return out;
}

double ArmDesign::mean_neutral_length() const {
  double sum = 0.0;
  for (const auto& a : actuators) sum += a.neutral_length;
  return actuators.empty() ? 0.0 : sum / static_cast<double>(actuators.size());
}

std::vector<std::string> ArmDesign::warnings() const {
  std::vector<std::string> out;
  bool distinct = false;
  for (std::size_t i = 1; i < actuators.size(); ++i)
    if (actuators[i].offset != actuators[0].offset) distinct = true;
  if (actuators.size() >= 2 && !distinct)
    out.push_back("all actuator offsets coincide: no differential moment authority");
  for (const auto& a : actuators)
    if (a.model.bending_stiffness > 0.0)
      out.push_back("positive bending stiffness destabilizes curvature");
  return out;
}

ArmShape ArmShape::from_twists(const Pose& base, std::vector<Twist> twists) {
  if (twists.empty()) throw std::runtime_error("arm shape needs at least one twist");
  ArmShape s;
  s.poses = integrate_twists(base, twists);
  s.twists = std::move(twists);
  return s;
}

std::vector<double> actuator_strains(const ArmDesign& design, const ArmShape& shape,
                                     std::size_t node) {
  if (node >= shape.nodes()) throw std::runtime_error("actuator_strains: node out of range");
  const Twist& xi = shape.twists[node];
  std::vector<double> eps;
  eps.reserve(design.actuators.size());
  for (const auto& a : design.actuators) {
    const Twist local = adjoint_inverse_twist(Pose{0.0, a.offset, 0.0}, xi);
    eps.push_back((local.l - a.neutral_length) / a.neutral_length);
  }
  return eps;
}

Wrench reaction_wrench(const ArmDesign& design, const ArmShape& shape,
                       const std::vector<double>& pressures, std::size_t node,
                       int* strain_warnings) {
  if (pressures.size() != design.actuators.size())
    throw std::runtime_error("reaction_wrench: pressure count != actuator count");
  const Twist& xi = shape.twists[node];
  Wrench a;
  double shear_sum = 0.0;
  for (std::size_t i = 0; i < design.actuators.size(); ++i) {
    const ActuatorPlacement& act = design.actuators[i];
    const Twist local = adjoint_inverse_twist(Pose{0.0, act.offset, 0.0}, xi);
    const double eps = (local.l - act.neutral_length) / act.neutral_length;
    const ForceEval fe = act.model.force(eps, pressures[i]);
    if (fe.strain_out_of_range && strain_warnings) ++(*strain_warnings);
    a.fx += fe.force;
    a.m += -act.offset * fe.force + act.model.moment(local.kappa, pressures[i]);
    shear_sum += local.gamma;
  }
  a.fy = -design.shear_penalty * shear_sum;
  return a;
}

std::vector<Wrench> load_wrench_sequence(const ArmShape& shape, const Wrench& tip_load) {
  std::vector<Wrench> q;
  q.reserve(shape.nodes());
  const Pose& tip = shape.tip();
  for (std::size_t k = 0; k < shape.nodes(); ++k) {
    const Pose rel = compose(inverse(shape.poses[k]), tip);
    q.push_back(transport_wrench(rel, tip_load));
  }
  return q;
}

std::vector<Wrench> residual(const ArmDesign& design, const ArmShape& shape,
                             const std::vector<double>& pressures, const Wrench& tip_load,
                             int* strain_warnings) {
  std::vector<Wrench> r = load_wrench_sequence(shape, tip_load);
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Wrench a = reaction_wrench(design, shape, pressures, k, strain_warnings);
    r[k].fx += a.fx;
    r[k].fy += a.fy;
    r[k].m += a.m;
  }
  return r;
}

}  // namespace softarm
