#include "softarm/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "softarm/batch.hpp"

namespace softarm {

ShapeErrorWeights ShapeErrorWeights::identity(std::size_t n) {
  ShapeErrorWeights w;
  w.node_weights.assign(n, Eigen::Matrix3d::Identity());
  return w;
}

ShapeErrorWeights ShapeErrorWeights::position_only(std::size_t n) {
  ShapeErrorWeights w;
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(2, 2) = 0.0;
  w.node_weights.assign(n, m);
  return w;
}

ShapeErrorWeights ShapeErrorWeights::tip_only(std::size_t n) {
  ShapeErrorWeights w;
  w.node_weights.assign(n, Eigen::Matrix3d::Zero());
  if (n > 0) w.node_weights.back() = Eigen::Matrix3d::Identity();
  return w;
}

double shape_error(const ArmShape& achieved, const ArmShape& target,
                   const ShapeErrorWeights& weights) {
  if (achieved.nodes() != target.nodes())
    throw std::runtime_error("shape_error: node counts differ");
  if (weights.node_weights.size() != achieved.nodes())
    throw std::runtime_error("shape_error: weight count != node count");
  double s = 0.0;
  for (std::size_t k = 1; k <= achieved.nodes(); ++k) {
    const Pose d = compose(inverse(achieved.poses[k]), target.poses[k]);
    const Eigen::Vector3d e(d.x, d.y, wrap_angle(d.theta));
    s += e.dot(weights.node_weights[k - 1] * e);
  }
  return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Branch {
  const ArmDesign* design;
  const Task* task;
  const ShapeErrorWeights* weights;
  const SearchSettings* settings;
  std::vector<double> max_p;

  ArmShape warm;
  bool has_warm = false;
  long long evals = 0;
  long long fails = 0;
  double best = kInf;
  Eigen::VectorXd best_u;
  ArmShape best_shape;

  double eval(Eigen::VectorXd u) {
    u = u.cwiseMax(0.0).cwiseMin(1.0);
    std::vector<double> p(max_p.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = max_p[i] * u[i];
    ++evals;
    EquilibriumResult r = solve_equilibrium(*design, p, task->tip_load,
                                            has_warm ? &warm : nullptr, settings->solver);
    if (!r.converged && settings->continuation_steps > 1)
      r = continuation_solve(*design, p, task->tip_load, settings->continuation_steps,
                             settings->solver);
    if (!r.converged) {
      ++fails;
      return kInf;
    }
    warm = r.shape;
    has_warm = true;
    const double f = shape_error(r.shape, task->shape, *weights);
    if (f < best) {
      best = f;
      best_u = u;
      best_shape = r.shape;
    }
    return f;
  }

  void run_nelder_mead(const Eigen::VectorXd& start) {
    const int m = static_cast<int>(max_p.size());
    const int budget = settings->max_evaluations_per_start;
    std::vector<Eigen::VectorXd> vx;
    std::vector<double> vf;
    vx.push_back(start.cwiseMax(0.0).cwiseMin(1.0));
    vf.push_back(eval(vx[0]));
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd u = vx[0];
      // Step into the box so corner starts still get a full-rank simplex.
      u[i] += (u[i] + settings->initial_simplex <= 1.0) ? settings->initial_simplex
                                                        : -settings->initial_simplex;
      vx.push_back(u);
      vf.push_back(eval(u));
    }

    std::vector<int> order(vx.size());
    double restart_step = settings->initial_simplex;
    while (evals < budget && best > settings->stop_objective) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return vf[a] < vf[b]; });
      const int ib = order[0], iw = order[m], is = order[m - 1];

      double spread = 0.0;
      for (int i = 1; i <= m; ++i) spread = std::max(spread, (vx[order[i]] - vx[ib]).norm());
      if (spread < 1e-10 && std::isfinite(vf[ib])) {
        // Stagnated simplex with budget left: restart around the incumbent,
        // halving the edge length each time so successive restarts refine.
        restart_step = std::max(0.5 * restart_step, 1e-7);
        const Eigen::VectorXd anchor = vx[ib];
        const double f_anchor = vf[ib];
        vx[0] = anchor;
        vf[0] = f_anchor;
        for (int i = 0; i < m && evals < budget; ++i) {
          Eigen::VectorXd uu = anchor;
          uu[i] += (uu[i] + restart_step <= 1.0) ? restart_step : -restart_step;
          vx[i + 1] = uu;
          vf[i + 1] = eval(uu);
        }
        continue;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < m; ++i) centroid += vx[order[i]];
      centroid /= m;

      const Eigen::VectorXd xr = centroid + (centroid - vx[iw]);
      const double fr = eval(xr);
      if (fr < vf[ib]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - vx[iw]);
        const double fe = eval(xe);
        if (fe < fr) { vx[iw] = xe; vf[iw] = fe; }
        else { vx[iw] = xr; vf[iw] = fr; }
      } else if (fr < vf[is]) {
        vx[iw] = xr;
        vf[iw] = fr;
      } else {
        const bool outside = fr < vf[iw];
        const double step = outside ? 0.5 : -0.5;
        const Eigen::VectorXd xc = centroid + step * (centroid - vx[iw]);
        const double fc = eval(xc);
        if (fc < std::min(fr, vf[iw])) {
          vx[iw] = xc;
          vf[iw] = fc;
        } else {
          for (std::size_t i = 0; i < vx.size(); ++i) {
            if (static_cast<int>(i) == ib) continue;
            vx[i] = vx[ib] + 0.5 * (vx[i] - vx[ib]);
            vf[i] = eval(vx[i]);
            if (evals >= budget) break;
          }
        }
      }
    }
  }

  void run_gradient(const Eigen::VectorXd& start) {
    const int m = static_cast<int>(max_p.size());
    const int budget = settings->max_evaluations_per_start;
    Eigen::VectorXd u = start.cwiseMax(0.0).cwiseMin(1.0);
    double f = eval(u);
    const double h = 1e-6;
    // Projected spectral gradient: the Barzilai-Borwein step s's / s'y adapts
    // to the local curvature, which plain steepest descent handles poorly on
    // the ill-conditioned valleys this objective tends to have.
    Eigen::VectorXd u_prev, g_prev;
    double t = 0.0;
    while (evals + m + 1 < budget && best > settings->stop_objective) {
      Eigen::VectorXd g(m);
      for (int i = 0; i < m; ++i) {
        Eigen::VectorXd uh = u;
        uh[i] = std::min(uh[i] + h, 1.0);
        const double step = uh[i] - u[i];
        g[i] = step > 0 ? (eval(uh) - f) / step : 0.0;
      }
      if (!g.allFinite() || g.norm() == 0.0) break;
      double trial = 0.25 / std::max(g.norm(), 1e-12);
      if (u_prev.size() == m) {
        const Eigen::VectorXd s = u - u_prev;
        const Eigen::VectorXd y = g - g_prev;
        const double sy = s.dot(y);
        if (sy > 0.0) trial = std::clamp(s.squaredNorm() / sy, 1e-12, 1e6);
        else if (t > 0.0) trial = t;
      }
      u_prev = u;
      g_prev = g;
      bool moved = false;
      while (evals < budget) {
        const Eigen::VectorXd ut = (u - trial * g).cwiseMax(0.0).cwiseMin(1.0);
        if ((ut - u).norm() < 1e-14) break;  // step vanished (pinned at a face)
        const double ft = eval(ut);
        if (ft < f) {
          u = ut;
          f = ft;
          t = trial;
          moved = true;
          break;
        }
        trial *= 0.5;
      }
      if (!moved) break;  // at the finite-difference noise floor
    }
  }
};

std::vector<Eigen::VectorXd> start_points(int m, int starts) {
  std::vector<Eigen::VectorXd> out;
  out.push_back(Eigen::VectorXd::Constant(m, 0.5));
  out.push_back(Eigen::VectorXd::Zero(m));
  out.push_back(Eigen::VectorXd::Ones(m));
  Eigen::VectorXd alt = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; i += 2) alt[i] = 1.0;
  out.push_back(alt);
  out.push_back(Eigen::VectorXd::Ones(m) - alt);
  while (static_cast<int>(out.size()) < starts) {
    // Deterministic extras: bit pattern corners beyond the canonical five.
    const std::size_t k = out.size();
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) u[i] = ((k >> i) & 1) ? 1.0 : 0.0;
    out.push_back(u);
  }
  out.resize(starts);
  return out;
}

}  // namespace

SearchResult search_attainability(const ArmDesign& design, const Task& task,
                                  const ShapeErrorWeights& weights,
                                  const SearchSettings& settings) {
  if (task.shape.nodes() != static_cast<std::size_t>(design.segment_count))
    throw std::runtime_error("search_attainability: task shape/design node mismatch");
  if (settings.starts < 1)
    throw std::runtime_error("search_attainability: need at least one start");
  const auto t0 = std::chrono::steady_clock::now();

  const int m = static_cast<int>(design.actuator_count());
  const std::vector<Eigen::VectorXd> starts = start_points(m, settings.starts);
  std::vector<Branch> branches(starts.size());
  for (auto& b : branches) {
    b.design = &design;
    b.task = &task;
    b.weights = &weights;
    b.settings = &settings;
    b.max_p = design.max_pressures();
  }

  // Start branches are independent; each one is sequential inside (warm starts).
  parallel_for_indexed(branches.size(), settings.threads,
                       [&](std::size_t i) {
                         if (settings.use_gradient)
                           branches[i].run_gradient(starts[i]);
                         else
                           branches[i].run_nelder_mead(starts[i]);
                       });

  SearchResult out;
  out.objective = kInf;
  for (const Branch& b : branches) {
    out.evaluations += b.evals;
    out.failed_solves += b.fails;
    if (b.best < out.objective) {
      out.objective = b.best;
      out.best_shape = b.best_shape;
      out.pressures.assign(b.best_u.size(), 0.0);
      for (int i = 0; i < b.best_u.size(); ++i) out.pressures[i] = b.max_p[i] * b.best_u[i];
    }
  }
  if (!std::isfinite(out.objective))
    throw std::runtime_error("search_attainability: every inner solve failed");
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace softarm
