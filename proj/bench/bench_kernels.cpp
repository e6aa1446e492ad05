// Microbenchmark for the batch kernels: times the OpenMP-parallel indexed map
// against its serial reference twin on the two workloads the experiment driver
// actually runs — batched equilibrium solves and batched hull-distance
// evaluations — and cross-checks that both produce identical bits.
//
// Usage: bench_kernels [cells] [repeats] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "softarm/attainability.hpp"
#include "softarm/batch.hpp"
#include "softarm/min_norm.hpp"
#include "softarm/rng.hpp"
#include "softarm/statics.hpp"

#include "helpers.hpp"

using namespace softarm;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Timing {
  double serial = 0.0;
  double parallel = 0.0;
};

void print_row(const char* name, const Timing& t) {
  std::printf("%-26s %10.4f s %10.4f s %8.2fx\n", name, t.serial, t.parallel,
              t.parallel > 0.0 ? t.serial / t.parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t cells = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 96;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const int threads = argc > 3 ? std::atoi(argv[3]) : 0;

  const ArmDesign design = softarm_test::antagonistic_design();
  const PressureSpace space = PressureSpace::of(design);

  // One pressure vector and tip load per cell, drawn once so every run times
  // the identical workload.
  Rng rng(9001);
  std::vector<std::vector<double>> pressures(cells);
  std::vector<Wrench> loads(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    pressures[i].resize(space.dims());
    for (std::size_t j = 0; j < space.dims(); ++j)
      pressures[i][j] = rng.uniform(0.0, space.max_pressures[j]);
    loads[i] = {rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0), rng.uniform(-0.5, 0.5)};
  }

  std::printf("kernel benchmark: %zu cells, %d repeat(s), threads=%d%s\n\n", cells,
              repeats, threads,
#ifdef _OPENMP
              ""
#else
              " (OpenMP unavailable: parallel kernel falls back to serial)"
#endif
  );
  std::printf("%-26s %12s %12s %9s\n", "workload", "serial", "parallel", "speedup");

  // --- workload 1: independent equilibrium solves.
  std::vector<EquilibriumResult> serial_eq(cells), parallel_eq(cells);
  Timing eq;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    serial_for_indexed(cells, [&](std::size_t i) {
      serial_eq[i] = solve_equilibrium(design, pressures[i], loads[i]);
    });
    eq.serial += seconds_since(t0);
    t0 = Clock::now();
    parallel_for_indexed(cells, threads, [&](std::size_t i) {
      parallel_eq[i] = solve_equilibrium(design, pressures[i], loads[i]);
    });
    eq.parallel += seconds_since(t0);
  }
  print_row("equilibrium solves", eq);

  bool identical = true;
  for (std::size_t i = 0; i < cells; ++i) {
    if (serial_eq[i].residual_norm != parallel_eq[i].residual_norm ||
        serial_eq[i].iterations != parallel_eq[i].iterations)
      identical = false;
    for (std::size_t k = 0; k < serial_eq[i].shape.twists.size(); ++k)
      if (serial_eq[i].shape.twists[k].l != parallel_eq[i].shape.twists[k].l ||
          serial_eq[i].shape.twists[k].gamma != parallel_eq[i].shape.twists[k].gamma ||
          serial_eq[i].shape.twists[k].kappa != parallel_eq[i].shape.twists[k].kappa)
        identical = false;
  }

  // --- workload 2: hull distances of many requirement wrenches, the per-cell
  // pass of the comparison driver.
  const ArmShape shape = softarm_test::neutral_shape(design);
  const auto hulls =
      build_absolute_hulls(design, shape, sample_pressure_edges(space, 5));
  std::vector<Wrench> queries(cells * hulls.size());
  for (auto& q : queries)
    q = {rng.uniform(-150.0, 150.0), rng.uniform(-150.0, 150.0), rng.uniform(-8.0, 8.0)};

  std::vector<double> serial_d(queries.size()), parallel_d(queries.size());
  Timing qp;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    serial_for_indexed(queries.size(), [&](std::size_t i) {
      serial_d[i] = hull_distance(hulls[i % hulls.size()], queries[i]);
    });
    qp.serial += seconds_since(t0);
    t0 = Clock::now();
    parallel_for_indexed(queries.size(), threads, [&](std::size_t i) {
      parallel_d[i] = hull_distance(hulls[i % hulls.size()], queries[i]);
    });
    qp.parallel += seconds_since(t0);
  }
  print_row("hull distances", qp);
  for (std::size_t i = 0; i < queries.size(); ++i)
    if (serial_d[i] != parallel_d[i]) identical = false;

  std::printf("\nserial and parallel results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
