#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "softarm/csv_io.hpp"
#include "softarm/experiment.hpp"
#include "softarm/svg_io.hpp"

// softarm: evaluate planar pneumatic arm designs against shape + tip-load
// tasks. Exit codes: 0 success / task attainable, 1 solver or runtime
// failure, 2 invalid input or configuration, 3 task unattainable.

namespace {

using namespace softarm;

std::vector<double> parse_numbers(const std::string& text, std::size_t expect,
                                  const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (...) {
      throw ConfigError(std::string(what) + ": bad number '" + cell + "'");
    }
  }
  if (expect != 0 && out.size() != expect)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(expect) +
                      " comma-separated values, got " + std::to_string(out.size()));
  return out;
}

Wrench parse_load(const std::string& text) {
  const auto v = parse_numbers(text, 3, "--load");
  return {v[0], v[1], v[2]};
}

ArmShape read_twists_csv(const std::filesystem::path& file, const ArmDesign& design) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open");
  std::vector<Twist> twists;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = parse_numbers(line, 3, file.string().c_str());
    twists.push_back({v[0], v[1], v[2]});
  }
  if (twists.size() != static_cast<std::size_t>(design.segment_count))
    throw ConfigError(file.string() + ": expected " +
                      std::to_string(design.segment_count) + " twist rows, got " +
                      std::to_string(twists.size()));
  return ArmShape::from_twists(design.base_pose, std::move(twists));
}

struct GlobalFlags {
  std::uint64_t seed = 1;
  bool seed_set = false;
  int per_edge = 5;
  bool per_edge_set = false;
  double tolerance = 1e-6;
  bool tolerance_set = false;
  int threads = 0;
  bool threads_set = false;
  std::string output_dir = "out";
  bool output_dir_set = false;
};

void apply_overrides(ExperimentSpec& spec, const GlobalFlags& g) {
  if (g.seed_set) spec.seed = g.seed;
  if (g.per_edge_set) spec.per_edge = g.per_edge;
  if (g.tolerance_set) spec.tolerance = g.tolerance;
  if (g.threads_set) spec.threads = g.threads;
  if (g.output_dir_set) spec.output_dir = g.output_dir;
}

int cmd_solve(const std::string& design_file, const std::string& pressures_text,
              const std::string& load_text, const std::string& init_file,
              int continuation, const std::string& csv_out, const GlobalFlags& g) {
  const ArmDesign design = load_design(design_file);
  const auto pressures =
      parse_numbers(pressures_text, design.actuator_count(), "--pressures");
  if (!PressureSpace::of(design).contains(pressures))
    throw ConfigError("--pressures: outside the box [0, max_pressure] of design '" +
                      design.name + "'");
  const Wrench load = load_text.empty() ? Wrench{} : parse_load(load_text);

  SolveSettings settings;
  settings.tolerance = g.tolerance;
  ArmShape init;
  const ArmShape* init_ptr = nullptr;
  if (!init_file.empty()) {
    init = read_twists_csv(init_file, design);
    init_ptr = &init;
  }
  const EquilibriumResult result =
      continuation > 1 ? continuation_solve(design, pressures, load, continuation, settings)
                       : solve_equilibrium(design, pressures, load, init_ptr, settings);

  std::printf("design: %s (%d segments, %zu actuators)\n", design.name.c_str(),
              design.segment_count, design.actuator_count());
  std::printf("converged: %s after %d iterations, residual %.3e\n",
              result.converged ? "yes" : "no", result.iterations, result.residual_norm);
  if (result.clamp_warnings > 0)
    std::printf("warning: %d actuator evaluations outside the admissible strain range\n",
                result.clamp_warnings);
  if (result.failed_continuation_step >= 0)
    std::printf("continuation failed at step %d\n", result.failed_continuation_step);
  std::printf("poses (node: x y theta):\n");
  for (std::size_t k = 0; k < result.shape.poses.size(); ++k) {
    const Pose& p = result.shape.poses[k];
    std::printf("  %zu: % .6f % .6f % .6f\n", k, p.x, p.y, p.theta);
  }
  std::printf("strains (segment: per actuator):\n");
  for (std::size_t k = 0; k < result.shape.nodes(); ++k) {
    const auto eps = actuator_strains(design, result.shape, k);
    std::printf("  %zu:", k + 1);
    for (double e : eps) std::printf(" % .6f", e);
    std::printf("\n");
  }
  if (!csv_out.empty()) {
    std::ofstream f(csv_out);
    if (!f) throw std::runtime_error(csv_out + ": cannot open for writing");
    f << "node,x,y,theta,l,gamma,kappa\n";
    for (std::size_t k = 0; k < result.shape.poses.size(); ++k) {
      const Pose& p = result.shape.poses[k];
      f << k << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
        << format_double(p.theta);
      if (k > 0) {
        const Twist& t = result.shape.twists[k - 1];
        f << ',' << format_double(t.l) << ',' << format_double(t.gamma) << ','
          << format_double(t.kappa);
      } else {
        f << ",,,";
      }
      f << '\n';
    }
  }
  return result.converged ? 0 : 1;
}

int cmd_analyze(const std::string& design_file, const std::string& task_file,
                bool per_node, bool hull_csv, const GlobalFlags& g) {
  const ArmDesign design = load_design(design_file);
  const Task task = load_task(task_file, design);
  AnalyzeSettings settings;
  settings.per_edge = g.per_edge;
  settings.epsilon_per_node = g.tolerance;
  settings.keep_hulls = hull_csv;
  const AttainabilityReport report = analyze(design, task, settings);

  std::printf("absolute unattainability: %.6e\n", report.absolute_unattainability);
  std::printf("relative unattainability: %.6e\n", report.relative_unattainability);
  std::printf("epsilon: %.3e\n", report.epsilon);
  if (per_node) {
    std::printf("per-node (node: absolute relative):\n");
    for (std::size_t k = 0; k < report.per_node_absolute.size(); ++k)
      std::printf("  %zu: %.6e %.6e\n", k + 1, report.per_node_absolute[k],
                  report.per_node_relative[k]);
  }
  if (hull_csv) {
    std::filesystem::create_directories(g.output_dir);
    const std::filesystem::path out(g.output_dir);
    write_hull_csv(out / "hulls_absolute.csv", report.absolute_hulls);
    write_hull_csv(out / "hulls_relative.csv", report.relative_hulls);
    std::printf("hull vertex tables written to %s\n", g.output_dir.c_str());
  }
  std::printf("attainable: %s\n", report.attainable ? "yes" : "no");
  return report.attainable ? 0 : 3;
}

int cmd_compare(const std::string& experiment_file, bool serial, const GlobalFlags& g) {
  ExperimentSpec spec = load_experiment(experiment_file);
  apply_overrides(spec, g);
  const CompareReport report = run_compare(spec, serial, true);
  std::printf("cells: %zu (%zu designs x %zu shapes x %zu loads)\n", report.cells.size(),
              spec.designs.size(), spec.shapes.size(), report.loads.size());
  std::printf("%-20s %-14s %14s %14s %12s", "design", "shape", "median_abs",
              "median_rel", "attainable");
  const bool with_search = spec.analysis != "hull";
  if (with_search) std::printf(" %14s", "median_search");
  std::printf("\n");
  for (const GroupResult& group : report.groups) {
    std::printf("%-20s %-14s %14.6e %14.6e %11.0f%%",
                spec.designs[group.design_index].name.c_str(),
                spec.shapes[group.shape_index].name.c_str(), group.median_absolute,
                group.median_relative, 100.0 * group.attainable_fraction);
    if (with_search) std::printf(" %14.6e", group.median_search);
    std::printf("\n");
  }
  std::printf("outputs in %s\n", spec.output_dir.c_str());
  return 0;
}

int cmd_bench(const std::string& experiment_file, bool serial, const GlobalFlags& g) {
  ExperimentSpec spec = load_experiment(experiment_file);
  apply_overrides(spec, g);
  if (spec.analysis != "both")
    throw ConfigError(experiment_file + ": bench requires analysis = \"both\"");
  const BenchReport bench = run_bench(spec, serial, true);
  std::printf("hull analysis:   %10.4f s total (%zu cells)\n", bench.hull_seconds,
              bench.compare.cells.size());
  std::printf("search baseline: %10.4f s total\n", bench.search_seconds);
  std::printf("speedup (search / hull): %.1fx\n", bench.ratio);
  std::printf("outputs in %s\n", spec.output_dir.c_str());
  return 0;
}

int cmd_shape_plan(const std::string& design_file, const std::string& tip_text,
                   const std::string& load_text, const std::string& candidates_file,
                   int generate, bool verify, const GlobalFlags& g) {
  const ArmDesign design = load_design(design_file);
  const auto tip_v = parse_numbers(tip_text, 3, "--tip");
  const Pose tip{tip_v[0], tip_v[1], wrap_angle(tip_v[2])};
  const Wrench load = parse_load(load_text);

  std::vector<ShapeSpec> candidates;
  if (!candidates_file.empty())
    candidates = load_shapes_file(candidates_file);
  else
    candidates = generate_two_arc_candidates(design, tip, generate);

  AnalyzeSettings settings;
  settings.per_edge = g.per_edge;
  settings.epsilon_per_node = g.tolerance;
  SearchSettings verify_settings;
  verify_settings.solver.tolerance = g.tolerance;
  verify_settings.threads = g.threads;
  const ShapePlanReport report =
      run_shape_plan(design, tip, load, candidates, settings, 1e-6,
                     verify ? &verify_settings : nullptr);

  std::printf("%zu candidates for tip (%.4f, %.4f, %.4f), load (%.2f, %.2f, %.2f)\n",
              report.candidates.size(), tip.x, tip.y, tip.theta, load.fx, load.fy,
              load.m);
  for (const PlanCandidate& c : report.rejected)
    std::printf("rejected '%s': tip pose off by %.3e (tolerance 1e-06)\n",
                c.name.c_str(), c.tip_error);
  std::printf("%-14s %14s %14s %8s %8s %12s\n", "candidate", "absolute", "relative",
              "abs_rank", "rel_rank", "tip_error");
  for (const PlanCandidate& c : report.candidates) {
    std::printf("%-14s %14.6e %14.6e %8d %8d %12.3e\n", c.name.c_str(), c.absolute,
                c.relative, c.rank_absolute, c.rank_relative, c.tip_error);
  }
  if (!report.rank_agreement)
    std::printf("note: absolute and relative rankings disagree\n");
  if (report.verified)
    std::printf("search verification on '%s': objective %.6e (%lld solves, %lld failed)\n",
                report.candidates.front().name.c_str(), report.verification.objective,
                report.verification.evaluations, report.verification.failed_solves);
  std::filesystem::create_directories(g.output_dir);
  const auto svg = std::filesystem::path(g.output_dir) / "shape_plan_best.svg";
  write_shape_svg(svg, report.candidates.front().shape.poses, nullptr,
                  report.candidates.front().name);
  std::printf("best candidate rendered to %s\n", svg.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar pneumatic arm attainability toolkit"};
  app.require_subcommand(1);

  GlobalFlags g;
  auto* seed_opt = app.add_option("--seed", g.seed, "seed for sampled experiment inputs");
  auto* pe_opt = app.add_option("--per-edge", g.per_edge,
                                "pressure-box edge samples per edge (>= 2)");
  auto* tol_opt = app.add_option("--tolerance", g.tolerance,
                                 "solver tolerance / per-node attainability epsilon");
  auto* thr_opt = app.add_option("--threads", g.threads,
                                 "worker threads for batch loops (0 = default)");
  auto* out_opt = app.add_option("--output-dir", g.output_dir, "output directory");

  std::string design_file, task_file, experiment_file, pressures_text, load_text;
  std::string init_file, csv_out, tip_text, candidates_file;
  int continuation = 1, generate = 7;
  bool per_node = false, hull_csv = false, serial = false, verify = false;

  auto* solve = app.add_subcommand("solve", "solve one equilibrium");
  solve->add_option("design", design_file, "design JSON file")->required();
  solve->add_option("--pressures", pressures_text, "comma-separated pressures (Pa)")
      ->required();
  solve->add_option("--load", load_text, "tip load fx,fy,m (default 0,0,0)");
  solve->add_option("--init", init_file, "initial twists CSV (l,gamma,kappa rows)");
  solve->add_option("--continuation", continuation,
                    "ramp pressures/load over this many steps");
  solve->add_option("--csv", csv_out, "write the equilibrium shape to this CSV");

  auto* analyze_cmd = app.add_subcommand("analyze", "wrench-hull attainability of a task");
  analyze_cmd->add_option("design", design_file, "design JSON file")->required();
  analyze_cmd->add_option("task", task_file, "task JSON file")->required();
  analyze_cmd->add_flag("--per-node", per_node, "print per-node metrics");
  analyze_cmd->add_flag("--hull-csv", hull_csv, "write hull vertex tables");

  auto* compare = app.add_subcommand("compare", "run a design/shape/load battery");
  compare->add_option("experiment", experiment_file, "experiment JSON file")->required();
  compare->add_flag("--serial", serial, "use the serial reference kernels");

  auto* bench = app.add_subcommand("bench", "time hull analysis vs. search baseline");
  bench->add_option("experiment", experiment_file, "experiment JSON file (analysis=both)")
      ->required();
  bench->add_flag("--serial", serial, "use the serial reference kernels");

  auto* plan = app.add_subcommand("shape-plan", "rank candidate shapes for a tip pose");
  plan->add_option("design", design_file, "design JSON file")->required();
  plan->add_option("--tip", tip_text, "target tip pose x,y,theta")->required();
  plan->add_option("--load", load_text, "tip load fx,fy,m")
      ->default_val(std::string("-7,0,0"));
  plan->add_option("--candidates", candidates_file, "candidate shapes JSON file");
  plan->add_option("--generate", generate, "generate this many two-arc candidates");
  plan->add_flag("--verify-search", verify, "run the search baseline on the best candidate");

  for (CLI::App* sub : {solve, analyze_cmd, compare, bench, plan}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  g.seed_set = seed_opt->count() > 0;
  g.per_edge_set = pe_opt->count() > 0;
  g.tolerance_set = tol_opt->count() > 0;
  g.threads_set = thr_opt->count() > 0;
  g.output_dir_set = out_opt->count() > 0;
  if (g.per_edge < 2) {
    std::fprintf(stderr, "error: --per-edge must be >= 2\n");
    return 2;
  }
  if (g.tolerance <= 0.0) {
    std::fprintf(stderr, "error: --tolerance must be positive\n");
    return 2;
  }

  try {
    if (solve->parsed())
      return cmd_solve(design_file, pressures_text, load_text, init_file, continuation,
                       csv_out, g);
    if (analyze_cmd->parsed())
      return cmd_analyze(design_file, task_file, per_node, hull_csv, g);
    if (compare->parsed()) return cmd_compare(experiment_file, serial, g);
    if (bench->parsed()) return cmd_bench(experiment_file, serial, g);
    if (plan->parsed())
      return cmd_shape_plan(design_file, tip_text, load_text, candidates_file, generate,
                            verify, g);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
