#include "softarm/attainability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "softarm/min_norm.hpp"
#include "softarm/rng.hpp"

namespace softarm {

PressureSpace PressureSpace::of(const ArmDesign& design) {
  return PressureSpace{design.max_pressures()};
}

bool PressureSpace::contains(const std::vector<double>& p) const {
  if (p.size() != max_pressures.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < 0.0 || p[i] > max_pressures[i]) return false;
  return true;
}

WrenchSequence requirement_wrench_sequence(const Task& task) {
  WrenchSequence q = load_wrench_sequence(task.shape, task.tip_load);
  for (Wrench& w : q) {
    w.fx = -w.fx;
    w.fy = -w.fy;
    w.m = -w.m;
  }
  return q;
}

WrenchSequence attainable_wrench_sequence(const ArmDesign& design, const ArmShape& shape,
                                          const std::vector<double>& pressures) {
  if (shape.nodes() != static_cast<std::size_t>(design.segment_count))
    throw std::runtime_error("attainable_wrench_sequence: shape/design node mismatch");
  WrenchSequence a;
  a.reserve(shape.nodes());
  for (std::size_t k = 0; k < shape.nodes(); ++k)
    a.push_back(reaction_wrench(design, shape, pressures, k));
  return a;
}

std::vector<std::vector<double>> sample_pressure_edges(const PressureSpace& space,
                                                       int per_edge) {
  if (per_edge < 2) throw std::runtime_error("sample_pressure_edges: per_edge must be >= 2");
  const std::size_t m = space.dims();
  if (m == 0) throw std::runtime_error("sample_pressure_edges: empty pressure space");
  std::set<std::vector<double>> unique;
  std::vector<std::vector<double>> out;
  for (std::size_t axis = 0; axis < m; ++axis) {
    const std::uint64_t combos = std::uint64_t{1} << (m - 1);
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
      std::vector<double> p(m, 0.0);
      std::uint64_t bit = 0;
      for (std::size_t d = 0; d < m; ++d) {
        if (d == axis) continue;
        if (mask & (std::uint64_t{1} << bit)) p[d] = space.max_pressures[d];
        ++bit;
      }
      for (int t = 0; t < per_edge; ++t) {
        p[axis] = space.max_pressures[axis] * t / (per_edge - 1);
        if (unique.insert(p).second) out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> sample_pressure_interior_beta(const PressureSpace& space,
                                                               int count, double alpha,
                                                               double beta,
                                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> p(space.dims());
    for (std::size_t d = 0; d < space.dims(); ++d)
      p[d] = space.max_pressures[d] * rng.beta(alpha, beta);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// One wrench sequence per pressure sample, regrouped per node.
std::vector<std::vector<Eigen::Vector3d>> node_point_sets(
    const ArmDesign& design, const ArmShape& shape,
    const std::vector<std::vector<double>>& samples) {
  const std::size_t n = shape.nodes();
  std::vector<std::vector<Eigen::Vector3d>> pts(n);
  for (auto& v : pts) v.reserve(samples.size());
  for (const auto& p : samples) {
    const WrenchSequence a = attainable_wrench_sequence(design, shape, p);
    for (std::size_t k = 0; k < n; ++k) pts[k].push_back(to_vector(a[k]));
  }
  return pts;
}

bool has_two_distinct(const std::vector<Eigen::Vector3d>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] != pts[0]) return true;
  return false;
}

}  // namespace

std::vector<WrenchHull> build_absolute_hulls(const ArmDesign& design, const ArmShape& shape,
                                             const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw std::runtime_error("build_absolute_hulls: no pressure samples");
  const auto pts = node_point_sets(design, shape, samples);
  std::vector<WrenchHull> hulls;
  hulls.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!has_two_distinct(pts[k]))
      throw std::runtime_error("build_absolute_hulls: node " + std::to_string(k + 1) +
                               " maps every sample to one wrench (no actuation authority)");
    hulls.push_back(build_hull(pts[k]));
  }
  return hulls;
}

std::vector<WrenchHull> build_relative_hulls(const ArmDesign& design, const ArmShape& shape,
                                             const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw std::runtime_error("build_relative_hulls: no pressure samples");
  auto pts = node_point_sets(design, shape, samples);
  std::vector<WrenchHull> hulls;
  hulls.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<Eigen::Vector3d> diff;
    diff.reserve(pts[k].size());
    for (std::size_t s = 0; s < pts[k].size(); ++s) diff.push_back(pts[k][s] - pts[0][s]);
    hulls.push_back(build_hull(diff));
  }
  return hulls;
}

AttainabilityReport analyze(const ArmDesign& design, const Task& task,
                            const AnalyzeSettings& settings) {
  const std::size_t n = task.shape.nodes();
  if (n != static_cast<std::size_t>(design.segment_count))
    throw std::runtime_error("analyze: task shape has " + std::to_string(n) +
                             " nodes but design has " +
                             std::to_string(design.segment_count));

  const auto samples = sample_pressure_edges(PressureSpace::of(design), settings.per_edge);
  auto absolute = build_absolute_hulls(design, task.shape, samples);
  auto relative = build_relative_hulls(design, task.shape, samples);
  const WrenchSequence req = requirement_wrench_sequence(task);

  AttainabilityReport report;
  report.per_node_absolute.reserve(n);
  report.per_node_relative.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    report.per_node_absolute.push_back(hull_distance(absolute[k], req[k]));
    const Wrench dreq{req[k].fx - req[0].fx, req[k].fy - req[0].fy, req[k].m - req[0].m};
    report.per_node_relative.push_back(hull_distance(relative[k], dreq));
    report.absolute_unattainability += report.per_node_absolute.back();
    report.relative_unattainability += report.per_node_relative.back();
  }
  report.epsilon = settings.epsilon_per_node * static_cast<double>(n);
  report.attainable = report.absolute_unattainability < report.epsilon &&
                      report.relative_unattainability < report.epsilon;
  if (settings.keep_hulls) {
    report.absolute_hulls = std::move(absolute);
    report.relative_hulls = std::move(relative);
  }
  return report;
}

}  // namespace softarm
