#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "softarm/csv_io.hpp"
#include "softarm/experiment.hpp"
#include "softarm/rng.hpp"
#include "softarm/statics.hpp"
#include "softarm/svg_io.hpp"
#include "helpers.hpp"

using namespace softarm;
using namespace softarm_test;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / "softarm_io_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = test_dir() / name;
  fs::create_directories(p.parent_path());
  std::ofstream f(p);
  f << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// A fully spelled-out design file matching the in-memory antagonistic design.
const char* kDesignJson = R"({
  "name": "antagonistic",
  "segment_count": 5,
  "base_pose": [0.0, 0.0, 1.5707963267948966],
  "shear_penalty": 1e5,
  "actuators": [
    {"kind": "bellows", "offset": 0.025, "neutral_length": 0.5},
    {"kind": "bellows", "offset": -0.025, "neutral_length": 0.5},
    {"kind": "mckibben", "offset": 0.05, "neutral_length": 0.5},
    {"kind": "mckibben", "offset": -0.05, "neutral_length": 0.5}
  ]
})";

}  // namespace

TEST_CASE("format_double survives a parse round trip bit-for-bit") {
  auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
  for (double v : {0.0, -0.0, 1.0, 1.0 / 3.0, 0.1, 1e-300, -2.5e300, 6.02214076e23,
                   3.14159265358979323846}) {
    CHECK(bits(std::stod(format_double(v))) == bits(v));
  }
  Rng rng(404);
  for (int i = 0; i < 1000; ++i) {
    const double v =
        rng.uniform(-1.0, 1.0) * std::pow(10.0, std::floor(rng.uniform(-30.0, 30.0)));
    CHECK(bits(std::stod(format_double(v))) == bits(v));
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(join_csv({"a", "b", "1.5"}) == "a,b,1.5");
  CHECK(join_csv({}) == "");
}

TEST_CASE("hull CSV writes and reads back the exact vertex set") {
  const std::vector<WrenchHull> hulls{
      build_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}),
      build_hull({{0.25, -0.5, 2.0}, {1.5, -0.5, 2.0}}),
  };
  const fs::path file = test_dir() / "hulls.csv";
  write_hull_csv(file, hulls);
  const auto nodes = read_hull_csv(file);
  REQUIRE(nodes.size() == 2);
  for (std::size_t n = 0; n < 2; ++n) {
    REQUIRE(nodes[n].size() == hulls[n].vertices.size());
    for (std::size_t v = 0; v < nodes[n].size(); ++v) {
      CHECK(nodes[n][v].fx == hulls[n].vertices[v].x());
      CHECK(nodes[n][v].fy == hulls[n].vertices[v].y());
      CHECK(nodes[n][v].m == hulls[n].vertices[v].z());
    }
  }

  CHECK_THROWS_WITH_AS(read_hull_csv(write_file("bad_header.csv", "a,b,c\n")),
                       doctest::Contains("header"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      read_hull_csv(write_file("bad_cell.csv", "node,vertex,fx,fy,m\n1,0,1,x,3\n")),
      doctest::Contains(":2"), std::runtime_error);
  CHECK_THROWS_AS(read_hull_csv(test_dir() / "does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("design files load with every field honored") {
  const fs::path file = write_file("designs/antagonistic.json", kDesignJson);
  const ArmDesign d = load_design(file);
  CHECK(d.name == "antagonistic");
  CHECK(d.segment_count == 5);
  CHECK(d.base_pose.theta == doctest::Approx(kPi / 2));
  CHECK(d.shear_penalty == doctest::Approx(1e5));
  REQUIRE(d.actuator_count() == 4);
  CHECK(d.actuators[0].model.kind == ActuatorKind::bellows);
  CHECK(d.actuators[0].offset == doctest::Approx(0.025));
  CHECK(d.actuators[0].model.max_pressure == doctest::Approx(50e3));
  CHECK(d.actuators[2].model.kind == ActuatorKind::mckibben);
  CHECK(d.actuators[2].model.max_pressure == doctest::Approx(100e3));
  CHECK(d.actuators[2].model.bending_stiffness == doctest::Approx(-0.285));

  // Loaded and hand-built designs must behave identically.
  const ArmDesign ref = antagonistic_design();
  const ArmShape s = neutral_shape(ref);
  const Wrench a = reaction_wrench(d, s, {10e3, 0, 0, 0}, 0);
  const Wrench b = reaction_wrench(ref, s, {10e3, 0, 0, 0}, 0);
  CHECK(a.fx == b.fx);
  CHECK(a.fy == b.fy);
  CHECK(a.m == b.m);
}

TEST_CASE("design parameter overrides are applied") {
  const fs::path file = write_file("designs/custom.json", R"({
    "actuators": [
      {"kind": "bellows", "offset": 0.02, "neutral_length": 0.4,
       "effective_area": 2e-3, "spring_constant": 55.0, "max_pressure": 80e3,
       "bending_stiffness": -0.5, "reference_pressure": 40e3},
      {"kind": "mckibben", "offset": -0.02, "neutral_length": 0.4,
       "spring_constant": 90.0, "max_force": 70.0, "free_strain": 0.3}
    ]
  })");
  const ArmDesign d = load_design(file);
  CHECK(d.name == "custom");  // falls back to the file stem
  CHECK(d.segment_count == 5);
  CHECK(d.actuators[0].model.bellows.effective_area == doctest::Approx(2e-3));
  CHECK(d.actuators[0].model.bellows.spring_constant == doctest::Approx(55.0));
  CHECK(d.actuators[0].model.bending_stiffness == doctest::Approx(-0.5));
  CHECK(d.actuators[0].model.reference_pressure == doctest::Approx(40e3));
  CHECK(d.actuators[0].neutral_length == doctest::Approx(0.4));
  CHECK(d.actuators[1].model.mckibben.spring_constant == doctest::Approx(90.0));
  CHECK(d.actuators[1].model.mckibben.max_force == doctest::Approx(70.0));
  CHECK(d.actuators[1].model.mckibben.free_strain == doctest::Approx(0.3));
}

TEST_CASE("design errors name the file and the problem") {
  const fs::path missing = write_file("designs/missing.json", R"({"segment_count": 3})");
  CHECK_THROWS_WITH_AS(load_design(missing), doctest::Contains("actuators"), ConfigError);
  CHECK_THROWS_WITH_AS(load_design(missing), doctest::Contains("missing.json"), ConfigError);

  CHECK_THROWS_WITH_AS(load_design(write_file("designs/one.json", R"({
    "actuators": [{"kind": "bellows", "offset": 0.0, "neutral_length": 0.5}]
  })")),
                       doctest::Contains("at least two"), ConfigError);

  CHECK_THROWS_WITH_AS(load_design(write_file("designs/kind.json", R"({
    "actuators": [
      {"kind": "hydraulic", "offset": 0.0, "neutral_length": 0.5},
      {"kind": "bellows", "offset": 0.0, "neutral_length": 0.5}
    ]
  })")),
                       doctest::Contains("unknown actuator kind"), ConfigError);

  CHECK_THROWS_WITH_AS(load_design(write_file("designs/frac.json", R"({
    "segment_count": 2.5,
    "actuators": [
      {"kind": "bellows", "offset": 0.0, "neutral_length": 0.5},
      {"kind": "bellows", "offset": 0.1, "neutral_length": 0.5}
    ]
  })")),
                       doctest::Contains("segment_count"), ConfigError);

  CHECK_THROWS_AS(load_design(write_file("designs/garbage.json", "{not json")), ConfigError);
  CHECK_THROWS_AS(load_design(test_dir() / "designs/absent.json"), ConfigError);
}

TEST_CASE("force grid CSV: round trip, relative paths, line diagnostics") {
  write_file("designs/table.csv",
             "strain_vs_pressure,0,50000\n"
             "-0.1,1.5,2.5\n"
             "0.2,3.5,4.5\n");
  const ForceGrid g = load_force_grid_csv(test_dir() / "designs/table.csv");
  REQUIRE(g.strain_axis.size() == 2);
  REQUIRE(g.pressure_axis.size() == 2);
  CHECK(g.strain_axis[0] == doctest::Approx(-0.1));
  CHECK(g.pressure_axis[1] == doctest::Approx(50000.0));
  CHECK(grid_force(g, -0.1, 0.0) == doctest::Approx(1.5));
  CHECK(grid_force(g, 0.2, 50000.0) == doctest::Approx(4.5));

  // force_csv is resolved relative to the design file's directory.
  const fs::path gd = write_file("designs/gridded.json", R"({
    "actuators": [
      {"kind": "grid", "offset": 0.02, "neutral_length": 0.5,
       "force_csv": "table.csv", "max_pressure": 50000},
      {"kind": "grid", "offset": -0.02, "neutral_length": 0.5,
       "force_csv": "table.csv", "max_pressure": 50000}
    ]
  })");
  const ArmDesign d = load_design(gd);
  CHECK(d.actuators[0].model.kind == ActuatorKind::grid);
  CHECK(d.actuators[0].model.grid.strain_axis.size() == 2);

  CHECK_THROWS_WITH_AS(load_force_grid_csv(write_file("designs/badrow.csv",
                                                      "s,0,100\n0.0,1,2\n0.5,oops,4\n")),
                       doctest::Contains(":3"), ConfigError);
  CHECK_THROWS_WITH_AS(load_force_grid_csv(write_file("designs/short.csv",
                                                      "s,0,100\n0.0,1\n")),
                       doctest::Contains("expected 3 cells"), ConfigError);
  CHECK_THROWS_AS(load_force_grid_csv(test_dir() / "designs/absent.csv"), ConfigError);
}

TEST_CASE("shape generators expand to the expected twist patterns") {
  const ArmDesign d = antagonistic_design();

  ShapeSpec constant;
  constant.generator = "constant";
  constant.length = 0.55;
  constant.curvature = 0.8;
  const ArmShape cs = constant.resolve(d);
  for (const Twist& t : cs.twists) {
    CHECK(t.l == 0.55);
    CHECK(t.gamma == 0.0);
    CHECK(t.kappa == 0.8);
  }

  ShapeSpec sc;
  sc.generator = "s_curve";
  sc.length = 0.5;
  sc.curvature_first = 1.5;
  sc.curvature_second = -1.5;
  sc.split = 0.5;  // ceil(0.5 * 5) = 3 nodes on the first arc
  const ArmShape ss = sc.resolve(d);
  for (int k = 0; k < 5; ++k) CHECK(ss.twists[k].kappa == (k < 3 ? 1.5 : -1.5));

  ShapeSpec ramp;
  ramp.generator = "ramp";
  ramp.length = 0.5;
  ramp.curvature_start = 0.0;
  ramp.curvature_end = 6.0;
  const ArmShape rs = ramp.resolve(d);
  for (int k = 0; k < 5; ++k)
    CHECK(rs.twists[k].kappa == doctest::Approx(1.5 * static_cast<double>(k)));

  ShapeSpec expl;
  expl.name = "short";
  expl.twists = {{0.5, 0, 0}, {0.5, 0, 0}, {0.5, 0, 0}};
  CHECK_THROWS_WITH_AS(expl.resolve(d), doctest::Contains("3 twists"), ConfigError);

  ShapeSpec unknown;
  unknown.generator = "spiral";
  CHECK_THROWS_WITH_AS(unknown.resolve(d), doctest::Contains("spiral"), ConfigError);
}

TEST_CASE("task and shapes files parse") {
  const ArmDesign d = antagonistic_design();
  const fs::path tf = write_file("tasks/reach.json", R"({
    "shape": {"generator": "constant", "length": 0.55, "curvature": 0.8},
    "tip_load": [0.0, -7.0, 0.0]
  })");
  const Task t = load_task(tf, d);
  CHECK(t.shape.nodes() == 5);
  CHECK(t.tip_load.fy == doctest::Approx(-7.0));

  const fs::path sf = write_file("tasks/shapes.json", R"({
    "shapes": [
      {"name": "a", "generator": "constant", "length": 0.5, "curvature": 0.0},
      {"name": "b", "twists": [[0.5,0,0],[0.5,0,0],[0.5,0,0],[0.5,0,0],[0.5,0,1]]}
    ]
  })");
  const auto shapes = load_shapes_file(sf);
  REQUIRE(shapes.size() == 2);
  CHECK(shapes[0].name == "a");
  CHECK(shapes[1].twists.size() == 5);

  CHECK_THROWS_WITH_AS(load_task(write_file("tasks/noload.json", R"({
    "shape": {"generator": "constant", "length": 0.5, "curvature": 0.0}
  })"),
                                 d),
                       doctest::Contains("tip_load"), ConfigError);
}

TEST_CASE("load batteries are seed-deterministic and range-respecting") {
  LoadSpec spec;
  spec.count = 40;
  spec.force_x[0] = -2.0;
  spec.force_x[1] = 2.0;
  spec.force_y[0] = 0.0;
  spec.force_y[1] = 5.0;
  spec.moment[0] = -0.25;
  spec.moment[1] = 0.25;
  const auto a = spec.realize(9);
  const auto b = spec.realize(9);
  const auto c = spec.realize(10);
  REQUIRE(a.size() == 40);
  bool all_same = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fx == b[i].fx);
    CHECK(a[i].fy == b[i].fy);
    CHECK(a[i].m == b[i].m);
    if (a[i].fx != c[i].fx) all_same = false;
    CHECK(a[i].fx >= -2.0);
    CHECK(a[i].fx <= 2.0);
    CHECK(a[i].fy >= 0.0);
    CHECK(a[i].fy <= 5.0);
    CHECK(std::abs(a[i].m) <= 0.25);
  }
  CHECK_FALSE(all_same);

  LoadSpec fixed;
  fixed.explicit_loads = {{1, 2, 3}, {4, 5, 6}};
  const auto e = fixed.realize(123);
  REQUIRE(e.size() == 2);
  CHECK(e[1].fy == 5.0);
}

TEST_CASE("experiment specs load with defaults and overrides") {
  write_file("exp/antagonistic.json", kDesignJson);
  const fs::path ef = write_file("exp/experiment.json", R"({
    "seed": 3,
    "designs": ["antagonistic.json"],
    "task_shapes": [{"name": "straight", "generator": "constant",
                     "length": 0.5, "curvature": 0.0}],
    "loads": {"count": 8, "force_x": [-1, 1], "force_y": [-4, 0], "moment": [-0.1, 0.1]},
    "analysis": "both",
    "per_edge": 3,
    "tolerance": 1e-5,
    "output_dir": "somewhere",
    "svg": false,
    "threads": 2,
    "weights": "tip",
    "search": {"starts": 2, "max_evaluations_per_start": 50,
               "continuation_steps": 3, "use_gradient": false}
  })");
  const ExperimentSpec spec = load_experiment(ef);
  CHECK(spec.seed == 3);
  REQUIRE(spec.designs.size() == 1);
  CHECK(spec.designs[0].name == "antagonistic");
  REQUIRE(spec.shapes.size() == 1);
  CHECK(spec.loads.count == 8);
  CHECK(spec.loads.force_y[1] == 0.0);
  CHECK(spec.analysis == "both");
  CHECK(spec.per_edge == 3);
  CHECK(spec.tolerance == doctest::Approx(1e-5));
  CHECK(spec.output_dir == "somewhere");
  CHECK_FALSE(spec.svg);
  CHECK(spec.threads == 2);
  CHECK(spec.weights == "tip");
  CHECK(spec.search.starts == 2);
  CHECK(spec.search.max_evaluations_per_start == 50);
  CHECK(spec.search.continuation_steps == 3);

  CHECK_THROWS_WITH_AS(load_experiment(write_file("exp/badmode.json", R"({
    "designs": ["antagonistic.json"],
    "task_shapes": [{"generator": "constant", "length": 0.5, "curvature": 0.0}],
    "loads": {"count": 1},
    "analysis": "psychic"
  })")),
                       doctest::Contains("analysis"), ConfigError);
}

TEST_CASE("weights factory accepts the three kinds only") {
  CHECK(make_weights("identity", 4).node_weights.size() == 4);
  CHECK(make_weights("position", 4).node_weights[0](2, 2) == 0.0);
  CHECK(make_weights("tip", 4).node_weights[0].isZero());
  CHECK_THROWS_AS(make_weights("uniform", 4), ConfigError);
}

namespace {

// Small in-memory battery shared by the compare/bench tests.
ExperimentSpec small_spec(const std::string& out_name) {
  ExperimentSpec spec;
  spec.seed = 5;
  spec.designs = {antagonistic_design(), bellows_only_design()};
  ShapeSpec straight;
  straight.name = "straight";
  straight.generator = "constant";
  straight.length = 0.5;
  straight.curvature = 0.0;
  ShapeSpec bent;
  bent.name = "bent";
  bent.generator = "constant";
  bent.length = 0.52;
  bent.curvature = 0.6;
  spec.shapes = {straight, bent};
  spec.loads.explicit_loads = {{0, 0, 0}, {0.5, -1.0, 0.05}, {0, -800.0, 0}};
  spec.analysis = "hull";
  spec.per_edge = 3;
  spec.output_dir = (test_dir() / out_name).string();
  return spec;
}

}  // namespace

TEST_CASE("compare runs are byte-identical when repeated") {
  ExperimentSpec spec = small_spec("run1");
  const CompareReport r1 = run_compare(spec);
  spec.output_dir = (test_dir() / "run2").string();
  const CompareReport r2 = run_compare(spec);

  REQUIRE(r1.cells.size() == 12);
  for (const char* name : {"report.txt", "results.csv", "groups.csv",
                           "hulls_antagonistic_straight_absolute.csv",
                           "hulls_bellows_only_bent_relative.csv",
                           "shape_antagonistic_bent.svg",
                           "hulls_antagonistic_straight.svg",
                           "hist_antagonistic_absolute.svg",
                           "hist_bellows_only_relative.svg"}) {
    const std::string a = slurp(test_dir() / "run1" / name);
    CHECK(a == slurp(test_dir() / "run2" / name));
    CHECK_FALSE(a.empty());
  }
  CHECK(slurp(test_dir() / "run1" / "shape_antagonistic_bent.svg").find("<svg") !=
        std::string::npos);

  // Serial reference kernel: same numbers, bit for bit.
  spec.output_dir = (test_dir() / "run3").string();
  const CompareReport r3 = run_compare(spec, /*use_serial=*/true);
  for (std::size_t i = 0; i < r1.cells.size(); ++i) {
    CHECK(r1.cells[i].absolute == r3.cells[i].absolute);
    CHECK(r1.cells[i].relative == r3.cells[i].relative);
  }
}

TEST_CASE("compare cells agree exactly with standalone analysis") {
  const ExperimentSpec spec = small_spec("cross");
  const CompareReport report = run_compare(spec, false, /*write_outputs=*/false);
  AnalyzeSettings settings;
  settings.per_edge = spec.per_edge;
  settings.epsilon_per_node = spec.tolerance;
  settings.keep_hulls = false;
  for (const CellResult& cell : report.cells) {
    const Task task{spec.shapes[cell.shape_index].resolve(spec.designs[cell.design_index]),
                    cell.load};
    const AttainabilityReport standalone = analyze(spec.designs[cell.design_index], task,
                                                   settings);
    CHECK(cell.absolute == standalone.absolute_unattainability);
    CHECK(cell.relative == standalone.relative_unattainability);
    CHECK(cell.attainable == standalone.attainable);
  }
  // The zero load on the neutral straight shape must be attainable; the
  // 800 N load must not be.
  CHECK(report.cells[0].attainable);
  CHECK_FALSE(report.cells[2].attainable);
}

TEST_CASE("search cells agree exactly with a standalone search") {
  ExperimentSpec spec;
  spec.designs = {bellows_only_design()};
  const auto eq = solve_equilibrium(spec.designs[0], {25e3, 10e3}, Wrench{0, -0.5, 0});
  REQUIRE(eq.converged);
  ShapeSpec target;
  target.name = "target";
  target.twists = eq.shape.twists;
  spec.shapes = {target};
  spec.loads.explicit_loads = {{0, -0.5, 0}};
  spec.analysis = "search";
  spec.search.starts = 2;
  spec.search.max_evaluations_per_start = 80;
  spec.output_dir = (test_dir() / "searchcmp").string();

  const CompareReport report = run_compare(spec, false, false);
  REQUIRE(report.cells.size() == 1);
  REQUIRE(report.cells[0].search_run);

  SearchSettings settings = spec.search;
  settings.solver.tolerance = spec.tolerance;
  settings.threads = 1;
  const SearchResult standalone = search_attainability(
      spec.designs[0], Task{eq.shape, spec.loads.explicit_loads[0]},
      make_weights(spec.weights, 5), settings);
  CHECK(report.cells[0].search_objective == standalone.objective);
  CHECK(report.cells[0].search_evaluations == standalone.evaluations);
  CHECK(report.cells[0].search_objective < 1e-4);
}

TEST_CASE("an empty load battery produces an empty zero-duration report") {
  ExperimentSpec spec = small_spec("empty");
  spec.loads.explicit_loads.clear();
  spec.analysis = "both";
  const BenchReport bench = run_bench(spec);
  CHECK(bench.compare.cells.empty());
  CHECK(bench.compare.loads.empty());
  CHECK(bench.hull_seconds == 0.0);
  CHECK(bench.search_seconds == 0.0);
  CHECK(bench.ratio == 0.0);
  REQUIRE(bench.compare.groups.size() == 4);
  CHECK(std::isnan(bench.compare.groups[0].median_absolute));

  const std::string results = slurp(test_dir() / "empty" / "results.csv");
  CHECK(results ==
        "design,shape,load,fx,fy,m,absolute,relative,attainable,"
        "search_objective,search_evaluations,search_failed,error\n");
}

TEST_CASE("a failing group is recorded without sinking the battery") {
  ExperimentSpec spec = small_spec("partial");
  ArmDesign blind = bellows_only_design();
  blind.name = "blind";
  for (auto& a : blind.actuators) {
    a.model.bellows.effective_area = 0.0;
    a.model.bending_stiffness = 0.0;
  }
  spec.designs = {antagonistic_design(), blind};
  const CompareReport report = run_compare(spec);
  REQUIRE(report.cells.size() == 12);
  for (const CellResult& cell : report.cells) {
    if (spec.designs[cell.design_index].name == "blind") {
      CHECK(std::isnan(cell.absolute));
      CHECK(cell.error.find("no actuation authority") != std::string::npos);
    } else {
      CHECK_FALSE(std::isnan(cell.absolute));
      CHECK(cell.error.empty());
    }
  }
  REQUIRE(report.groups.size() == 4);
  CHECK(report.groups[0].error.empty());
  CHECK_FALSE(report.groups[2].error.empty());
  CHECK(std::isnan(report.groups[2].median_absolute));
  CHECK_FALSE(std::isnan(report.groups[0].median_absolute));
  // The summary files still exist and mention the failure.
  CHECK(slurp(test_dir() / "partial" / "groups.csv").find("no actuation authority") !=
        std::string::npos);
  CHECK(slurp(test_dir() / "partial" / "report.txt").find("failed") != std::string::npos);
}

TEST_CASE("bench wraps compare and enforces both analyses") {
  ExperimentSpec spec = small_spec("bench");
  spec.loads.explicit_loads = {{0.2, -0.4, 0.0}};
  CHECK_THROWS_AS(run_bench(spec), std::runtime_error);  // analysis == "hull"

  spec.analysis = "both";
  spec.search.starts = 2;
  spec.search.max_evaluations_per_start = 40;
  const BenchReport bench = run_bench(spec);
  CHECK(bench.search_seconds > 0.0);
  CHECK(bench.hull_seconds > 0.0);
  CHECK(bench.ratio == doctest::Approx(bench.search_seconds / bench.hull_seconds));
  CHECK(fs::exists(test_dir() / "bench" / "bench.csv"));
  CHECK(fs::exists(test_dir() / "bench" / "bench_groups.csv"));
  CHECK(slurp(test_dir() / "bench" / "report.txt").find("speedup") != std::string::npos);
}

TEST_CASE("median and rank-correlation reference values") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(median({7.0}) == 7.0);
  CHECK_THROWS_AS(median({}), std::runtime_error);

  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Tied pair in the first sample: average ranks give 3 / sqrt(10).
  CHECK(spearman_rho({1, 2, 2, 3}, {10, 20, 30, 40}) ==
        doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(spearman_rho({1, 1, 1}, {1, 2, 3}), std::runtime_error);
  CHECK_THROWS_AS(spearman_rho({1, 2}, {1, 2, 3}), std::runtime_error);
}

TEST_CASE("two-arc candidates hit the requested tip pose") {
  const ArmDesign d = antagonistic_design();
  const Pose tip_target{0.12, 0.34, 1.1};
  const auto candidates = generate_two_arc_candidates(d, tip_target, 7);
  REQUIRE(candidates.size() == 7);
  for (const ShapeSpec& spec : candidates) {
    const ArmShape s = spec.resolve(d);
    const Pose diff = compose(inverse(s.tip()), tip_target);
    CHECK(std::sqrt(diff.x * diff.x + diff.y * diff.y + diff.theta * diff.theta) < 1e-9);
  }
  CHECK_THROWS_AS(generate_two_arc_candidates(d, tip_target, 0), std::runtime_error);
}

TEST_CASE("shape planning ranks a known-attainable candidate first") {
  const ArmDesign d = antagonistic_design();
  const Wrench load{0.3, -1.5, 0.0};
  const auto eq = solve_equilibrium(d, {20e3, 6e3, 15e3, 40e3}, load);
  REQUIRE(eq.converged);
  const Pose tip_target = eq.shape.tip();

  auto candidates = generate_two_arc_candidates(d, tip_target, 5);
  ShapeSpec oracle;
  oracle.name = "oracle";
  oracle.twists = eq.shape.twists;
  candidates.push_back(oracle);

  AnalyzeSettings settings;
  settings.per_edge = 3;
  SearchSettings verify;
  verify.starts = 3;
  verify.max_evaluations_per_start = 150;
  const ShapePlanReport report =
      run_shape_plan(d, tip_target, load, candidates, settings, 1e-6, &verify);

  REQUIRE(report.candidates.size() == 6);
  CHECK(report.candidates.front().name == "oracle");
  CHECK(report.candidates.front().absolute < 1e-4);
  CHECK(report.candidates.front().tip_ok);
  for (const PlanCandidate& c : report.candidates) CHECK(c.tip_ok);

  // Ranks are a permutation of 1..n for both metrics.
  std::vector<int> seen_abs, seen_rel;
  for (const PlanCandidate& c : report.candidates) {
    seen_abs.push_back(c.rank_absolute);
    seen_rel.push_back(c.rank_relative);
  }
  std::sort(seen_abs.begin(), seen_abs.end());
  std::sort(seen_rel.begin(), seen_rel.end());
  for (int i = 0; i < 6; ++i) {
    CHECK(seen_abs[i] == i + 1);
    CHECK(seen_rel[i] == i + 1);
  }
  CHECK(report.candidates.front().rank_absolute == 1);

  REQUIRE(report.verified);
  CHECK(report.verification.objective < 1e-3);
}

TEST_CASE("shape SVG output is deterministic and well-formed") {
  const ArmDesign d = antagonistic_design();
  const ArmShape achieved = neutral_shape(d);
  ShapeSpec bent;
  bent.generator = "constant";
  bent.length = 0.52;
  bent.curvature = 0.9;
  const ArmShape target = bent.resolve(d);

  const fs::path a = test_dir() / "shape_a.svg";
  const fs::path b = test_dir() / "shape_b.svg";
  write_shape_svg(a, achieved.poses, &target.poses, "overlay");
  write_shape_svg(b, achieved.poses, &target.poses, "overlay");
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
  CHECK(text.find("polyline") != std::string::npos);
  CHECK(text.find("overlay") != std::string::npos);
}

TEST_CASE("hull projection and histogram SVGs are deterministic and well-formed") {
  // A full-rank tetrahedron and a moment-axis segment: the projection onto
  // (fx, m) degrades gracefully from polygon to polyline.
  const WrenchHull tetra = build_hull({{0.0, 0.0, 0.0},
                                       {1.0, 0.0, 0.0},
                                       {0.0, 1.0, 0.0},
                                       {0.0, 0.0, 1.0}});
  const WrenchHull segment = build_hull({{0.0, 0.0, 0.0}, {0.0, 0.0, 2.0}});

  const fs::path a = test_dir() / "hulls_a.svg";
  const fs::path b = test_dir() / "hulls_b.svg";
  write_hull_svg(a, {tetra, segment}, "two nodes");
  write_hull_svg(b, {tetra, segment}, "two nodes");
  const std::string hull_text = slurp(a);
  CHECK(hull_text == slurp(b));
  CHECK(hull_text.find("<polygon") != std::string::npos);
  CHECK(hull_text.find("n1") != std::string::npos);
  CHECK(hull_text.find("n2") != std::string::npos);
  CHECK(hull_text.find("two nodes") != std::string::npos);

  const std::vector<double> values = {0.0, 1.0, 2.0, 2.0, 3.0,
                                      std::numeric_limits<double>::quiet_NaN()};
  const fs::path ha = test_dir() / "hist_a.svg";
  const fs::path hb = test_dir() / "hist_b.svg";
  write_histogram_svg(ha, values, 4, "spread");
  write_histogram_svg(hb, values, 4, "spread");
  const std::string hist_text = slurp(ha);
  CHECK(hist_text == slurp(hb));
  CHECK(hist_text.find("<polygon") != std::string::npos);
  CHECK(hist_text.find("median 2") != std::string::npos);  // NaN is dropped
  CHECK(hist_text.find("n=5") != std::string::npos);

  const fs::path empty = test_dir() / "hist_empty.svg";
  write_histogram_svg(empty, {}, 4, "empty");
  CHECK(slurp(empty).find("no data") != std::string::npos);
}

TEST_CASE("shape planning rejects candidates that miss the tip pose") {
  const ArmDesign d = antagonistic_design();
  const Pose tip_target{0.12, 0.34, 1.1};
  auto candidates = generate_two_arc_candidates(d, tip_target, 3);
  ShapeSpec off;
  off.name = "off_target";
  off.generator = "constant";
  off.length = 0.3;
  off.curvature = 0.0;
  candidates.push_back(off);

  AnalyzeSettings settings;
  settings.per_edge = 3;
  const Wrench load{0.0, -1.0, 0.0};
  const ShapePlanReport report = run_shape_plan(d, tip_target, load, candidates, settings);

  CHECK(report.candidates.size() == 3);
  REQUIRE(report.rejected.size() == 1);
  CHECK(report.rejected.front().name == "off_target");
  CHECK_FALSE(report.rejected.front().tip_ok);
  CHECK(report.rejected.front().tip_error > 1e-3);
  CHECK(std::isnan(report.rejected.front().absolute));
  CHECK(report.rejected.front().rank_absolute == 0);
  for (const PlanCandidate& c : report.candidates) CHECK(c.tip_ok);

  // A battery with no tip-valid candidate is a config error, not a ranking.
  CHECK_THROWS_AS(run_shape_plan(d, tip_target, load, {off}, settings), ConfigError);
}
