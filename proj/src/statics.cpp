#include "softarm/statics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace softarm {

namespace {

ArmShape shape_from_vector(const ArmDesign& design, const Eigen::VectorXd& x) {
  std::vector<Twist> twists(static_cast<std::size_t>(design.segment_count));
  for (std::size_t k = 0; k < twists.size(); ++k)
    twists[k] = {x[3 * k], x[3 * k + 1], x[3 * k + 2]};
  return ArmShape::from_twists(design.base_pose, std::move(twists));
}

Eigen::VectorXd vector_from_shape(const ArmShape& shape) {
  Eigen::VectorXd x(3 * shape.nodes());
  for (std::size_t k = 0; k < shape.nodes(); ++k) {
    x[3 * k] = shape.twists[k].l;
    x[3 * k + 1] = shape.twists[k].gamma;
    x[3 * k + 2] = shape.twists[k].kappa;
  }
  return x;
}

Eigen::VectorXd eval_residual(const ArmDesign& design, const std::vector<double>& pressures,
                              const Wrench& tip_load, const Eigen::VectorXd& x) {
  const ArmShape shape = shape_from_vector(design, x);
  const std::vector<Wrench> r = residual(design, shape, pressures, tip_load);
  Eigen::VectorXd out(3 * r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!std::isfinite(r[k].fx) || !std::isfinite(r[k].fy) || !std::isfinite(r[k].m))
      throw std::runtime_error("equilibrium residual is not finite at node " +
                               std::to_string(k + 1));
    out[3 * k] = r[k].fx;
    out[3 * k + 1] = r[k].fy;
    out[3 * k + 2] = r[k].m;
  }
  return out;
}

double max_node_norm(const Eigen::VectorXd& r) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < r.size() / 3; ++k)
    worst = std::max(worst, r.segment<3>(3 * k).norm());
  return worst;
}

}  // namespace

EquilibriumResult solve_equilibrium(const ArmDesign& design,
                                    const std::vector<double>& pressures,
                                    const Wrench& tip_load, const ArmShape* initial,
                                    const SolveSettings& settings) {
  if (design.actuators.empty())
    throw std::runtime_error("solve_equilibrium: design has no actuators");
  if (pressures.size() != design.actuators.size())
    throw std::runtime_error("solve_equilibrium: pressure count != actuator count");

  const Eigen::Index n = 3 * design.segment_count;
  Eigen::VectorXd x(n);
  if (initial) {
    if (initial->twists.size() != static_cast<std::size_t>(design.segment_count))
      throw std::runtime_error("solve_equilibrium: initial shape has wrong node count");
    x = vector_from_shape(*initial);
  } else {
    x.setZero();
    const double l0 = design.mean_neutral_length();
    for (Eigen::Index k = 0; k < design.segment_count; ++k) x[3 * k] = l0;
  }

  Eigen::VectorXd r = eval_residual(design, pressures, tip_load, x);
  double norm2 = r.norm();
  double lambda = settings.damping;

  EquilibriumResult out;
  out.iterations = 0;
  while (true) {
    if (max_node_norm(r) <= settings.tolerance) {
      out.converged = true;
      break;
    }
    if (out.iterations >= settings.max_iterations) break;

    // Forward-difference Jacobian of the stacked residual.
    Eigen::MatrixXd J(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = settings.fd_step * (1.0 + std::abs(x[j]));
      Eigen::VectorXd xh = x;
      xh[j] += h;
      J.col(j) = (eval_residual(design, pressures, tip_load, xh) - r) / h;
    }
    const Eigen::MatrixXd H = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;

    // Grow the damping until a step does not increase the stacked residual.
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd Hd = H;
      Hd.diagonal().array() += lambda;
      const Eigen::VectorXd dx = Hd.ldlt().solve(-g);
      const Eigen::VectorXd xt = x + dx;
      const Eigen::VectorXd rt = eval_residual(design, pressures, tip_load, xt);
      if (rt.norm() <= norm2) {
        x = xt;
        r = rt;
        norm2 = rt.norm();
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    ++out.iterations;
    if (!accepted) break;  // stalled: report the best iterate, not converged
  }

  out.shape = shape_from_vector(design, x);
  out.residual_norm = max_node_norm(r);
  out.clamp_warnings = 0;
  residual(design, out.shape, pressures, tip_load, &out.clamp_warnings);
  return out;
}

EquilibriumResult continuation_solve(const ArmDesign& design,
                                     const std::vector<double>& pressures,
                                     const Wrench& tip_load, int steps,
                                     const SolveSettings& settings) {
  if (steps < 1) throw std::runtime_error("continuation_solve: steps must be >= 1");
  EquilibriumResult last;
  const ArmShape* warm = nullptr;
  for (int s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    std::vector<double> p = pressures;
    for (double& v : p) v *= t;
    const Wrench q{tip_load.fx * t, tip_load.fy * t, tip_load.m * t};
    last = solve_equilibrium(design, p, q, warm, settings);
    if (!last.converged) {
      last.failed_continuation_step = s;
      return last;
    }
    warm = &last.shape;
  }
  return last;
}

}  // namespace softarm
