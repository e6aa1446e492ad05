#include "softarm/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "softarm/batch.hpp"
#include "softarm/csv_io.hpp"
#include "softarm/min_norm.hpp"
#include "softarm/svg_io.hpp"

namespace softarm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return out.empty() ? "unnamed" : out;
}

// Per-(design, shape) state shared by every load cell.
struct GroupData {
  ArmShape shape;
  std::vector<WrenchHull> absolute;
  std::vector<WrenchHull> relative;
  double build_seconds = 0.0;
  std::string error;  // hull family could not be built; cells inherit this
};

// Error text goes into a CSV cell, so field and record separators must go.
std::string csv_safe_message(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return text;
}

template <typename F>
void for_indexed(bool use_serial, std::size_t n, int threads, F&& f) {
  if (use_serial)
    serial_for_indexed(n, f);
  else
    parallel_for_indexed(n, threads, f);
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::runtime_error("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::runtime_error("spearman_rho needs two equally sized samples of >= 2");
  const std::vector<double> ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0.0 || db == 0.0)
    throw std::runtime_error("spearman_rho: a sample is constant");
  return num / std::sqrt(da * db);
}

CompareReport run_compare(const ExperimentSpec& spec, bool use_serial, bool write_outputs) {
  const std::size_t D = spec.designs.size();
  const std::size_t S = spec.shapes.size();
  if (D == 0 || S == 0) throw std::runtime_error("run_compare: no designs or shapes");
  const bool want_hull = spec.analysis == "hull" || spec.analysis == "both";
  const bool want_search = spec.analysis == "search" || spec.analysis == "both";

  CompareReport report;
  report.loads = spec.loads.realize(spec.seed);
  const std::size_t L = report.loads.size();
  report.cells.resize(D * S * L);
  report.groups.resize(D * S);

  // Hull pass: build each group's hull family once, then measure every load's
  // requirement distance against it. A group whose hulls cannot be built (no
  // actuation authority, bad shape) is recorded and its cells skipped; the
  // rest of the battery still runs. An empty battery skips the builds too.
  std::vector<GroupData> groups(D * S);
  const auto hull_start = Clock::now();
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t s = 0; s < S; ++s) {
      GroupData& g = groups[d * S + s];
      const auto t0 = Clock::now();
      try {
        g.shape = spec.shapes[s].resolve(spec.designs[d]);
        if (want_hull && L > 0) {
          const auto samples =
              sample_pressure_edges(PressureSpace::of(spec.designs[d]), spec.per_edge);
          g.absolute = build_absolute_hulls(spec.designs[d], g.shape, samples);
          g.relative = build_relative_hulls(spec.designs[d], g.shape, samples);
        }
      } catch (const std::exception& e) {
        g.error = e.what();
      }
      g.build_seconds = elapsed(t0);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    report.cells[i].design_index = i / (S * L);
    report.cells[i].shape_index = (i / L) % S;
    report.cells[i].load_index = i % L;
    report.cells[i].load = report.loads[i % L];
  }
  if (want_hull) {
    for_indexed(use_serial, report.cells.size(), spec.threads, [&](std::size_t i) {
      CellResult& cell = report.cells[i];
      const GroupData& g = groups[cell.design_index * S + cell.shape_index];
      if (!g.error.empty()) {
        cell.absolute = nan;
        cell.relative = nan;
        cell.error = g.error;
        return;
      }
      const auto t0 = Clock::now();
      const WrenchSequence req = requirement_wrench_sequence(Task{g.shape, cell.load});
      for (std::size_t k = 0; k < g.shape.nodes(); ++k) {
        cell.absolute += hull_distance(g.absolute[k], req[k]);
        const Wrench dreq{req[k].fx - req[0].fx, req[k].fy - req[0].fy,
                          req[k].m - req[0].m};
        cell.relative += hull_distance(g.relative[k], dreq);
      }
      const double eps = spec.tolerance * static_cast<double>(g.shape.nodes());
      cell.attainable = cell.absolute < eps && cell.relative < eps;
      cell.hull_seconds = elapsed(t0);
    });
  }
  report.hull_seconds = (want_hull && L > 0) ? elapsed(hull_start) : 0.0;

  if (want_search) {
    const auto search_start = Clock::now();
    SearchSettings settings = spec.search;
    settings.solver.tolerance = spec.tolerance;
    settings.threads = 1;  // the cell loop owns the parallelism
    for_indexed(use_serial, report.cells.size(), spec.threads, [&](std::size_t i) {
      CellResult& cell = report.cells[i];
      const GroupData& g = groups[cell.design_index * S + cell.shape_index];
      if (!g.error.empty()) {
        cell.error = g.error;
        return;
      }
      const ArmDesign& design = spec.designs[cell.design_index];
      const ShapeErrorWeights weights =
          make_weights(spec.weights, static_cast<std::size_t>(design.segment_count));
      try {
        const SearchResult r =
            search_attainability(design, Task{g.shape, cell.load}, weights, settings);
        cell.search_run = true;
        cell.search_objective = r.objective;
        cell.search_evaluations = r.evaluations;
        cell.search_failed = r.failed_solves;
        cell.search_seconds = r.seconds;
      } catch (const std::exception& e) {
        if (cell.error.empty()) cell.error = e.what();
      }
    });
    report.search_seconds = L > 0 ? elapsed(search_start) : 0.0;
  }

  // Group aggregates. Failed cells are excluded from the medians; a group
  // with no successful cell reports NaN medians rather than vanishing.
  const double nan_stat = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t s = 0; s < S; ++s) {
      GroupResult& g = report.groups[d * S + s];
      g.design_index = d;
      g.shape_index = s;
      g.hull_build_seconds = groups[d * S + s].build_seconds;
      g.error = groups[d * S + s].error;
      std::vector<double> abs_v, rel_v, search_v;
      double attained = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        const CellResult& cell = report.cells[(d * S + s) * L + l];
        if (!std::isnan(cell.absolute)) {
          abs_v.push_back(cell.absolute);
          rel_v.push_back(cell.relative);
        }
        if (cell.attainable) attained += 1.0;
        if (cell.search_run) search_v.push_back(cell.search_objective);
        g.hull_cell_seconds += cell.hull_seconds;
        g.search_cell_seconds += cell.search_seconds;
      }
      if (want_hull) {
        g.median_absolute = abs_v.empty() ? nan_stat : median(abs_v);
        g.median_relative = rel_v.empty() ? nan_stat : median(rel_v);
        g.attainable_fraction = L > 0 ? attained / static_cast<double>(L) : 0.0;
      }
      if (!search_v.empty()) g.median_search = median(search_v);
    }
  }

  if (write_outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    const fs::path out(spec.output_dir);

    {
      std::ofstream f(out / "results.csv");
      if (!f) throw std::runtime_error((out / "results.csv").string() + ": cannot open");
      f << "design,shape,load,fx,fy,m";
      if (want_hull) f << ",absolute,relative,attainable";
      if (want_search) f << ",search_objective,search_evaluations,search_failed";
      f << ",error\n";
      for (const CellResult& c : report.cells) {
        f << safe_name(spec.designs[c.design_index].name) << ','
          << safe_name(spec.shapes[c.shape_index].name) << ',' << c.load_index << ','
          << format_double(c.load.fx) << ',' << format_double(c.load.fy) << ','
          << format_double(c.load.m);
        if (want_hull)
          f << ',' << format_double(c.absolute) << ',' << format_double(c.relative)
            << ',' << (c.attainable ? 1 : 0);
        if (want_search)
          f << ',' << format_double(c.search_objective) << ',' << c.search_evaluations
            << ',' << c.search_failed;
        f << ',' << csv_safe_message(c.error) << '\n';
      }
    }
    {
      std::ofstream f(out / "groups.csv");
      if (!f) throw std::runtime_error((out / "groups.csv").string() + ": cannot open");
      f << "design,shape";
      if (want_hull) f << ",median_absolute,median_relative,attainable_fraction";
      if (want_search) f << ",median_search";
      f << ",error\n";
      for (const GroupResult& g : report.groups) {
        f << safe_name(spec.designs[g.design_index].name) << ','
          << safe_name(spec.shapes[g.shape_index].name);
        if (want_hull)
          f << ',' << format_double(g.median_absolute) << ','
            << format_double(g.median_relative) << ','
            << format_double(g.attainable_fraction);
        if (want_search) f << ',' << format_double(g.median_search);
        f << ',' << csv_safe_message(g.error) << '\n';
      }
    }
    for (std::size_t d = 0; d < D && want_hull; ++d) {
      for (std::size_t s = 0; s < S; ++s) {
        if (groups[d * S + s].absolute.empty()) continue;  // failed or empty battery
        const std::string stem = safe_name(spec.designs[d].name) + "_" +
                                 safe_name(spec.shapes[s].name);
        write_hull_csv(out / ("hulls_" + stem + "_absolute.csv"),
                       groups[d * S + s].absolute);
        write_hull_csv(out / ("hulls_" + stem + "_relative.csv"),
                       groups[d * S + s].relative);
      }
    }
    if (spec.svg) {
      for (std::size_t d = 0; d < D; ++d)
        for (std::size_t s = 0; s < S; ++s) {
          if (groups[d * S + s].shape.poses.empty()) continue;  // failed to resolve
          const std::string stem = safe_name(spec.designs[d].name) + "_" +
                                   safe_name(spec.shapes[s].name);
          write_shape_svg(out / ("shape_" + stem + ".svg"), groups[d * S + s].shape.poses,
                          nullptr, stem);
          if (want_hull && !groups[d * S + s].absolute.empty())
            write_hull_svg(out / ("hulls_" + stem + ".svg"), groups[d * S + s].absolute,
                           stem);
        }
      // Per-design distributions of the per-cell metrics, failed cells skipped.
      for (std::size_t d = 0; d < D && want_hull; ++d) {
        std::vector<double> abs_v, rel_v;
        for (std::size_t s = 0; s < S; ++s)
          for (std::size_t l = 0; l < L; ++l) {
            const CellResult& cell = report.cells[(d * S + s) * L + l];
            if (std::isnan(cell.absolute)) continue;
            abs_v.push_back(cell.absolute);
            rel_v.push_back(cell.relative);
          }
        if (abs_v.empty()) continue;
        const std::string dn = safe_name(spec.designs[d].name);
        write_histogram_svg(out / ("hist_" + dn + "_absolute.svg"), abs_v, 20,
                            dn + " absolute unattainability");
        write_histogram_svg(out / ("hist_" + dn + "_relative.svg"), rel_v, 20,
                            dn + " relative unattainability");
      }
    }
    {
      std::ofstream f(out / "report.txt");
      if (!f) throw std::runtime_error((out / "report.txt").string() + ": cannot open");
      f << "battery: " << D << " design(s) x " << S << " shape(s) x " << L
        << " load(s)\n";
      f << "analysis: " << spec.analysis << "\n";
      f << "per-edge samples: " << spec.per_edge << "\n";
      f << "tolerance: " << format_double(spec.tolerance) << "\n";
      f << "seed: " << spec.seed << "\n\n";
      for (const GroupResult& g : report.groups) {
        f << safe_name(spec.designs[g.design_index].name) << " / "
          << safe_name(spec.shapes[g.shape_index].name) << ":";
        if (!g.error.empty()) {
          f << " failed (" << g.error << ")\n";
          continue;
        }
        if (want_hull)
          f << " median absolute " << format_double(g.median_absolute)
            << ", median relative " << format_double(g.median_relative)
            << ", attainable " << format_double(g.attainable_fraction);
        if (want_search) f << " | median search " << format_double(g.median_search);
        f << "\n";
      }
    }
  }
  return report;
}

BenchReport run_bench(const ExperimentSpec& spec, bool use_serial, bool write_outputs) {
  if (spec.analysis != "both")
    throw std::runtime_error("run_bench requires analysis = \"both\"");
  BenchReport bench;
  bench.compare = run_compare(spec, use_serial, write_outputs);
  bench.hull_seconds = bench.compare.hull_seconds;
  bench.search_seconds = bench.compare.search_seconds;
  if (bench.hull_seconds > 0.0)
    bench.ratio = bench.search_seconds / bench.hull_seconds;
  else if (bench.search_seconds > 0.0)
    bench.ratio = std::numeric_limits<double>::infinity();
  // else: nothing ran (empty battery), keep the 0 default

  if (write_outputs) {
    namespace fs = std::filesystem;
    const fs::path out(spec.output_dir);
    fs::create_directories(out);
    {
      std::ofstream f(out / "bench.csv");
      if (!f) throw std::runtime_error((out / "bench.csv").string() + ": cannot open");
      f << "design,shape,load,hull_seconds,search_seconds\n";
      for (const CellResult& c : bench.compare.cells)
        f << safe_name(spec.designs[c.design_index].name) << ','
          << safe_name(spec.shapes[c.shape_index].name) << ',' << c.load_index << ','
          << format_double(c.hull_seconds) << ',' << format_double(c.search_seconds)
          << '\n';
    }
    {
      std::ofstream f(out / "bench_groups.csv");
      if (!f)
        throw std::runtime_error((out / "bench_groups.csv").string() + ": cannot open");
      f << "design,shape,hull_build_seconds,hull_cell_seconds,search_cell_seconds\n";
      for (const GroupResult& g : bench.compare.groups)
        f << safe_name(spec.designs[g.design_index].name) << ','
          << safe_name(spec.shapes[g.shape_index].name) << ','
          << format_double(g.hull_build_seconds) << ','
          << format_double(g.hull_cell_seconds) << ','
          << format_double(g.search_cell_seconds) << '\n';
    }
    {
      std::ofstream f(out / "report.txt", std::ios::app);
      if (!f) throw std::runtime_error((out / "report.txt").string() + ": cannot open");
      f << "\nhull analysis total: " << format_double(bench.hull_seconds) << " s\n"
        << "search total: " << format_double(bench.search_seconds) << " s\n"
        << "speedup (search / hull): " << format_double(bench.ratio) << "x\n";
    }
  }
  return bench;
}

std::vector<ShapeSpec> generate_two_arc_candidates(const ArmDesign& design,
                                                   const Pose& tip_target, int count) {
  if (count < 1) throw std::runtime_error("generate_two_arc_candidates: count must be >= 1");
  const std::size_t n = static_cast<std::size_t>(design.segment_count);
  if (n < 2)
    throw std::runtime_error("generate_two_arc_candidates: need at least two segments");
  const std::size_t n1 = n / 2, n2 = n - n1;
  const Pose h = compose(inverse(design.base_pose), tip_target);
  // First-arc total length: the neutral share of the first n1 segments,
  // slightly extended so typical targets keep strains moderate.
  const double a = 1.1 * design.mean_neutral_length() * static_cast<double>(n1) /
                   static_cast<double>(n);
  std::vector<ShapeSpec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double b =
        count > 1 ? -2.0 + 4.0 * static_cast<double>(i) / (count - 1) : 0.0;
    const Twist first_total{a, 0.0, b};
    const Pose mid = exp_twist(first_total);
    const Twist second_total = log_pose(compose(inverse(mid), h));
    ShapeSpec spec;
    spec.name = "two_arc_" + std::to_string(i);
    spec.twists.assign(n, Twist{});
    const double s1 = static_cast<double>(n) / static_cast<double>(n1);
    const double s2 = static_cast<double>(n) / static_cast<double>(n2);
    for (std::size_t k = 0; k < n1; ++k)
      spec.twists[k] = {first_total.l * s1, first_total.gamma * s1, first_total.kappa * s1};
    for (std::size_t k = n1; k < n; ++k)
      spec.twists[k] = {second_total.l * s2, second_total.gamma * s2,
                        second_total.kappa * s2};
    out.push_back(std::move(spec));
  }
  return out;
}

ShapePlanReport run_shape_plan(const ArmDesign& design, const Pose& tip_target,
                               const Wrench& load,
                               const std::vector<ShapeSpec>& candidates,
                               const AnalyzeSettings& analyze_settings,
                               double tip_tolerance, const SearchSettings* verify) {
  if (candidates.empty()) throw std::runtime_error("run_shape_plan: no candidates");
  ShapePlanReport report;
  report.candidates.reserve(candidates.size());
  for (const ShapeSpec& spec : candidates) {
    PlanCandidate c;
    c.name = spec.name;
    c.shape = spec.resolve(design);
    const Pose diff = compose(inverse(c.shape.tip()), tip_target);
    c.tip_error = std::sqrt(diff.x * diff.x + diff.y * diff.y + diff.theta * diff.theta);
    c.tip_ok = c.tip_error <= tip_tolerance;
    if (!c.tip_ok) {
      // Precondition violation: record the diagnostic, skip the analysis.
      c.absolute = std::numeric_limits<double>::quiet_NaN();
      c.relative = std::numeric_limits<double>::quiet_NaN();
      report.rejected.push_back(std::move(c));
      continue;
    }
    AnalyzeSettings as = analyze_settings;
    as.keep_hulls = false;
    const AttainabilityReport r = analyze(design, Task{c.shape, load}, as);
    c.absolute = r.absolute_unattainability;
    c.relative = r.relative_unattainability;
    report.candidates.push_back(std::move(c));
  }
  if (report.candidates.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const PlanCandidate& c : report.rejected) best = std::min(best, c.tip_error);
    throw ConfigError("shape plan: every candidate misses the tip pose (closest is " +
                      std::to_string(best) + " away, tolerance " +
                      std::to_string(tip_tolerance) + ")");
  }

  // Rank by each metric independently; report whether the orders agree.
  const std::size_t n = report.candidates.size();
  auto rank_by = [&](auto key) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return key(report.candidates[x]) < key(report.candidates[y]);
    });
    return order;
  };
  const auto abs_order = rank_by([](const PlanCandidate& c) { return c.absolute; });
  const auto rel_order = rank_by([](const PlanCandidate& c) { return c.relative; });
  for (std::size_t i = 0; i < n; ++i) {
    report.candidates[abs_order[i]].rank_absolute = static_cast<int>(i) + 1;
    report.candidates[rel_order[i]].rank_relative = static_cast<int>(i) + 1;
  }
  for (const PlanCandidate& c : report.candidates)
    if (c.rank_absolute != c.rank_relative) report.rank_agreement = false;
  std::stable_sort(report.candidates.begin(), report.candidates.end(),
                   [](const PlanCandidate& a, const PlanCandidate& b) {
                     if (a.absolute != b.absolute) return a.absolute < b.absolute;
                     return a.relative < b.relative;
                   });

  if (verify) {
    const PlanCandidate& best = report.candidates.front();
    const ShapeErrorWeights weights =
        ShapeErrorWeights::identity(static_cast<std::size_t>(design.segment_count));
    report.verification =
        search_attainability(design, Task{best.shape, load}, weights, *verify);
    report.verified = true;
  }
  return report;
}

}  // namespace softarm
