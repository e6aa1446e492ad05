#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "softarm/config_io.hpp"

// Experiment drivers behind the compare / bench / shape-plan subcommands:
// a (design x task-shape x load) battery evaluated with the hull analysis
// and/or the equilibrium search, written out as deterministic CSV (plus
// optional SVG overlays), and the two-arc shape-planning workflow.

namespace softarm {

// One (design, shape, load) evaluation.
struct CellResult {
  std::size_t design_index = 0;
  std::size_t shape_index = 0;
  std::size_t load_index = 0;
  Wrench load;
  double absolute = 0.0;  // summed per-node hull distances (absolute metric)
  double relative = 0.0;
  bool attainable = false;
  bool search_run = false;
  double search_objective = std::numeric_limits<double>::quiet_NaN();
  long long search_evaluations = 0;
  long long search_failed = 0;
  double hull_seconds = 0.0;  // per-cell distance evaluation (hull build excluded)
  double search_seconds = 0.0;
  std::string error;  // first failure hit while evaluating this cell, if any
};

// Aggregates over the load axis for one (design, shape) pair.
struct GroupResult {
  std::size_t design_index = 0;
  std::size_t shape_index = 0;
  double median_absolute = 0.0;
  double median_relative = 0.0;
  double attainable_fraction = 0.0;
  double median_search = std::numeric_limits<double>::quiet_NaN();
  double hull_build_seconds = 0.0;
  double hull_cell_seconds = 0.0;
  double search_cell_seconds = 0.0;
  std::string error;  // set when the group's hull family could not be built
};

struct CompareReport {
  std::vector<Wrench> loads;
  std::vector<CellResult> cells;    // index = (d * S + s) * L + l
  std::vector<GroupResult> groups;  // index = d * S + s
  double hull_seconds = 0.0;        // wall: hull builds + every cell distance pass
  double search_seconds = 0.0;      // wall: every cell search pass
};

// Runs the battery. `use_serial` forces the serial reference kernel for the
// cell loops (results are identical either way; benchmarks compare timings).
// With `write_outputs` the report lands in spec.output_dir as report.txt,
// results.csv, groups.csv, per-group hull vertex tables, and SVG renderings
// (arm shapes, per-group hull projections onto the force/moment plane, and
// per-design unattainability histograms).
// Per-cell failures are recorded in the cell's `error` and excluded from the
// group medians; an empty load battery produces a header-only, zero-duration
// report instead of an error.
CompareReport run_compare(const ExperimentSpec& spec, bool use_serial = false,
                          bool write_outputs = true);

struct BenchReport {
  CompareReport compare;
  double hull_seconds = 0.0;
  double search_seconds = 0.0;
  double ratio = 0.0;  // search_seconds / hull_seconds (0 when nothing ran)
};

// Requires spec.analysis == "both"; adds bench.csv / bench_groups.csv (the
// only outputs carrying wall-clock columns) next to the compare outputs.
BenchReport run_bench(const ExperimentSpec& spec, bool use_serial = false,
                      bool write_outputs = true);

struct PlanCandidate {
  std::string name;
  ArmShape shape;
  double tip_error = 0.0;  // pose-difference norm against the requested tip pose
  bool tip_ok = false;
  double absolute = 0.0;
  double relative = 0.0;
  int rank_absolute = 0;  // 1-based
  int rank_relative = 0;
};

struct ShapePlanReport {
  std::vector<PlanCandidate> candidates;  // tip-valid only, sorted by (absolute, relative)
  std::vector<PlanCandidate> rejected;    // tip-pose violations: never analyzed or ranked
  bool rank_agreement = true;  // absolute and relative orderings coincide
  bool verified = false;
  SearchResult verification;   // search on the top candidate, if requested
};

// Two-arc candidates reaching `tip_target` exactly: the first half of the
// segments share one twist, the rest share the closing twist computed from
// the group logarithm. `count` sweeps the first-arc curvature.
std::vector<ShapeSpec> generate_two_arc_candidates(const ArmDesign& design,
                                                   const Pose& tip_target, int count);

// Candidates whose resolved tip pose misses `tip_target` by more than
// `tip_tolerance` are rejected (reported with their tip error, not analyzed);
// rejecting every candidate is a ConfigError.
ShapePlanReport run_shape_plan(const ArmDesign& design, const Pose& tip_target,
                               const Wrench& load,
                               const std::vector<ShapeSpec>& candidates,
                               const AnalyzeSettings& analyze_settings,
                               double tip_tolerance = 1e-6,
                               const SearchSettings* verify = nullptr);

// Small stats helpers shared by the drivers and the validation suite.
double median(std::vector<double> values);
// Spearman rank correlation with average ranks on ties.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace softarm
