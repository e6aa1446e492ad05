#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "softarm/arm_model.hpp"
#include "softarm/attainability.hpp"
#include "softarm/search.hpp"

// JSON config ingestion (designs, tasks, experiment specs) plus the CSV force
// grid reader. Schemas are documented in the README; every parse error names
// the file and the offending field.

namespace softarm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ArmDesign load_design(const std::filesystem::path& file);

// Force table CSV: first row = pressure axis (leading label cell ignored),
// first column = strain axis, body = forces in newtons.
ForceGrid load_force_grid_csv(const std::filesystem::path& file);

// A task shape: explicit twists, or one of the named generator families.
struct ShapeSpec {
  std::string name;
  std::string generator;  // "constant" | "s_curve" | "ramp" | "" for explicit twists
  double length = 0.5;
  double curvature = 0.0;         // constant
  double curvature_first = 0.0;   // s_curve
  double curvature_second = 0.0;
  double split = 0.5;
  double curvature_start = 0.0;   // ramp
  double curvature_end = 0.0;
  std::vector<Twist> twists;      // explicit

  ArmShape resolve(const ArmDesign& design) const;
};

Task load_task(const std::filesystem::path& file, const ArmDesign& design);

// Candidate shape list for shape planning: {"shapes": [shape-spec...]}.
std::vector<ShapeSpec> load_shapes_file(const std::filesystem::path& file);

struct LoadSpec {
  int count = 0;  // 0 => use explicit_loads
  double force_x[2] = {-10.0, 10.0};
  double force_y[2] = {-10.0, 10.0};
  double moment[2] = {-1.0, 1.0};
  std::vector<Wrench> explicit_loads;

  std::vector<Wrench> realize(std::uint64_t seed) const;
};

struct ExperimentSpec {
  std::uint64_t seed = 1;
  std::vector<std::filesystem::path> design_files;
  std::vector<ArmDesign> designs;
  std::vector<ShapeSpec> shapes;
  LoadSpec loads;
  std::string analysis = "hull";  // hull | search | both
  int per_edge = 5;
  double tolerance = 1e-6;  // solver tolerance and per-node attainability epsilon
  std::string output_dir = "out";
  SearchSettings search;
  bool svg = true;
  int threads = 0;
  std::string weights = "identity";  // identity | position | tip
};

ExperimentSpec load_experiment(const std::filesystem::path& file);

ShapeErrorWeights make_weights(const std::string& kind, std::size_t n);

}  // namespace softarm
