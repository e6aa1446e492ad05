#include "softarm/config_io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "softarm/rng.hpp"

namespace softarm {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

double need_number(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double opt_number(const json& j, const std::string& key, double fallback,
                  const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return j[key].get<double>();
}

std::string opt_string(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  return j[key].get<std::string>();
}

Wrench parse_wrench(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number())
    throw ConfigError(where + ": expected [fx, fy, m]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Pose parse_pose(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number())
    throw ConfigError(where + ": expected [x, y, theta]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

ActuatorPlacement parse_actuator(const json& j, const std::string& where,
                                 const std::filesystem::path& base_dir) {
  ActuatorPlacement a;
  const std::string kind = need(j, "kind", where).get<std::string>();
  a.offset = need_number(j, "offset", where);
  a.neutral_length = need_number(j, "neutral_length", where);
  if (a.neutral_length <= 0.0) throw ConfigError(where + ": neutral_length must be positive");

  if (kind == "mckibben") {
    McKibbenParams mp;
    mp.spring_constant = opt_number(j, "spring_constant", mp.spring_constant, where);
    mp.max_force = opt_number(j, "max_force", mp.max_force, where);
    mp.free_strain = opt_number(j, "free_strain", mp.free_strain, where);
    a.model = ActuatorModel::make_mckibben(opt_number(j, "max_pressure", 100e3, where), mp);
  } else if (kind == "bellows") {
    BellowsParams bp;
    bp.effective_area = opt_number(j, "effective_area", bp.effective_area, where);
    bp.spring_constant = opt_number(j, "spring_constant", bp.spring_constant, where);
    a.model = ActuatorModel::make_bellows(opt_number(j, "max_pressure", 50e3, where), bp);
  } else if (kind == "grid") {
    const std::string rel = need(j, "force_csv", where).get<std::string>();
    ForceGrid grid = load_force_grid_csv(base_dir / rel);
    a.model = ActuatorModel::make_grid(std::move(grid), need_number(j, "max_pressure", where));
  } else {
    throw ConfigError(where + ": unknown actuator kind '" + kind + "'");
  }
  if (a.model.max_pressure <= 0.0) throw ConfigError(where + ": max_pressure must be positive");
  a.model.bending_stiffness =
      opt_number(j, "bending_stiffness", a.model.bending_stiffness, where);
  a.model.reference_pressure =
      opt_number(j, "reference_pressure", a.model.reference_pressure, where);
  if (a.model.reference_pressure <= 0.0)
    throw ConfigError(where + ": reference_pressure must be positive");
  return a;
}

ShapeSpec parse_shape(const json& j, const std::string& where) {
  ShapeSpec s;
  s.name = opt_string(j, "name", "shape");
  if (j.contains("twists")) {
    const json& tw = j["twists"];
    if (!tw.is_array() || tw.empty()) throw ConfigError(where + ": 'twists' must be a non-empty array");
    for (std::size_t i = 0; i < tw.size(); ++i) {
      const json& t = tw[i];
      if (!t.is_array() || t.size() != 3)
        throw ConfigError(where + ": twists[" + std::to_string(i) + "] must be [l, gamma, kappa]");
      s.twists.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
    }
    return s;
  }
  s.generator = need(j, "generator", where).get<std::string>();
  s.length = need_number(j, "length", where);
  if (s.generator == "constant") {
    s.curvature = need_number(j, "curvature", where);
  } else if (s.generator == "s_curve") {
    s.curvature_first = need_number(j, "curvature_first", where);
    s.curvature_second = need_number(j, "curvature_second", where);
    s.split = opt_number(j, "split", 0.5, where);
  } else if (s.generator == "ramp") {
    s.curvature_start = need_number(j, "curvature_start", where);
    s.curvature_end = need_number(j, "curvature_end", where);
  } else {
    throw ConfigError(where + ": unknown generator '" + s.generator + "'");
  }
  return s;
}

}  // namespace

ArmDesign load_design(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string where = file.string();
  ArmDesign d;
  d.name = opt_string(j, "name", file.stem().string());
  const double n = opt_number(j, "segment_count", 5, where);
  if (n < 1 || n != std::floor(n)) throw ConfigError(where + ": segment_count must be a positive integer");
  d.segment_count = static_cast<int>(n);
  if (j.contains("base_pose")) d.base_pose = parse_pose(j["base_pose"], where + ": base_pose");
  d.shear_penalty = opt_number(j, "shear_penalty", d.shear_penalty, where);
  if (d.shear_penalty <= 0.0) throw ConfigError(where + ": shear_penalty must be positive");
  const json& acts = need(j, "actuators", where);
  if (!acts.is_array() || acts.size() < 2)
    throw ConfigError(where + ": 'actuators' must list at least two actuators");
  for (std::size_t i = 0; i < acts.size(); ++i)
    d.actuators.push_back(
        parse_actuator(acts[i], where + ": actuators[" + std::to_string(i) + "]",
                       file.parent_path()));
  for (const std::string& w : d.warnings())
    std::fprintf(stderr, "warning: %s: %s\n", where.c_str(), w.c_str());
  return d;
}

ForceGrid load_force_grid_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open");
  ForceGrid grid;
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (lineno == 1) {
      for (std::size_t c = 1; c < cells.size(); ++c) {
        try {
          grid.pressure_axis.push_back(std::stod(cells[c]));
        } catch (...) {
          throw ConfigError(file.string() + ":1: bad pressure value '" + cells[c] + "'");
        }
      }
      continue;
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        row.push_back(std::stod(cells[c]));
      } catch (...) {
        throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": bad value '" +
                          cells[c] + "'");
      }
    }
    if (row.size() != grid.pressure_axis.size() + 1)
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(grid.pressure_axis.size() + 1) +
                        " cells, got " + std::to_string(row.size()));
    grid.strain_axis.push_back(row[0]);
    rows.push_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  for (const auto& r : rows) grid.forces.insert(grid.forces.end(), r.begin(), r.end());
  try {
    grid.check();
  } catch (const std::exception& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return grid;
}

ArmShape ShapeSpec::resolve(const ArmDesign& design) const {
  const std::size_t n = static_cast<std::size_t>(design.segment_count);
  if (!twists.empty()) {
    if (twists.size() != n)
      throw ConfigError("shape '" + name + "' has " + std::to_string(twists.size()) +
                        " twists but design '" + design.name + "' has " + std::to_string(n) +
                        " segments");
    return ArmShape::from_twists(design.base_pose, twists);
  }
  std::vector<Twist> tw(n);
  if (generator == "constant") {
    for (auto& t : tw) t = {length, 0.0, curvature};
  } else if (generator == "s_curve") {
    const std::size_t first = std::min(n, static_cast<std::size_t>(std::ceil(split * n)));
    for (std::size_t k = 0; k < n; ++k)
      tw[k] = {length, 0.0, k < first ? curvature_first : curvature_second};
  } else if (generator == "ramp") {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
      tw[k] = {length, 0.0, curvature_start + (curvature_end - curvature_start) * t};
    }
  } else {
    throw ConfigError("shape '" + name + "': unknown generator '" + generator + "'");
  }
  return ArmShape::from_twists(design.base_pose, tw);
}

Task load_task(const std::filesystem::path& file, const ArmDesign& design) {
  const json j = read_json(file);
  const std::string where = file.string();
  Task t;
  const ShapeSpec spec = parse_shape(need(j, "shape", where), where + ": shape");
  t.shape = spec.resolve(design);
  t.tip_load = parse_wrench(need(j, "tip_load", where), where + ": tip_load");
  return t;
}

std::vector<ShapeSpec> load_shapes_file(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string where = file.string();
  const json& arr = need(j, "shapes", where);
  if (!arr.is_array() || arr.empty())
    throw ConfigError(where + ": 'shapes' must be a non-empty array");
  std::vector<ShapeSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_shape(arr[i], where + ": shapes[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Wrench> LoadSpec::realize(std::uint64_t seed) const {
  if (count <= 0) return explicit_loads;
  Rng rng(Rng::substream(seed, 0x10adULL));
  std::vector<Wrench> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Wrench w;
    w.fx = rng.uniform(force_x[0], force_x[1]);
    w.fy = rng.uniform(force_y[0], force_y[1]);
    w.m = rng.uniform(moment[0], moment[1]);
    out.push_back(w);
  }
  return out;
}

ExperimentSpec load_experiment(const std::filesystem::path& file) {
  const json j = read_json(file);
  const std::string where = file.string();
  ExperimentSpec spec;
  spec.seed = static_cast<std::uint64_t>(opt_number(j, "seed", 1, where));
  const json& designs = need(j, "designs", where);
  if (!designs.is_array() || designs.empty())
    throw ConfigError(where + ": 'designs' must be a non-empty array of file paths");
  for (const auto& d : designs) {
    const std::filesystem::path p = file.parent_path() / d.get<std::string>();
    spec.design_files.push_back(p);
    spec.designs.push_back(load_design(p));
  }
  const json& shapes = need(j, "task_shapes", where);
  if (!shapes.is_array() || shapes.empty())
    throw ConfigError(where + ": 'task_shapes' must be a non-empty array");
  for (std::size_t i = 0; i < shapes.size(); ++i)
    spec.shapes.push_back(parse_shape(shapes[i], where + ": task_shapes[" + std::to_string(i) + "]"));

  const json& loads = need(j, "loads", where);
  if (loads.contains("explicit")) {
    for (std::size_t i = 0; i < loads["explicit"].size(); ++i)
      spec.loads.explicit_loads.push_back(
          parse_wrench(loads["explicit"][i], where + ": loads.explicit[" + std::to_string(i) + "]"));
    spec.loads.count = 0;
  } else {
    spec.loads.count = static_cast<int>(need_number(loads, "count", where + ": loads"));
    if (spec.loads.count < 1) throw ConfigError(where + ": loads.count must be >= 1");
    auto range = [&](const char* key, double* dst) {
      if (!loads.contains(key)) return;
      const json& r = loads[key];
      if (!r.is_array() || r.size() != 2)
        throw ConfigError(where + ": loads." + key + " must be [lo, hi]");
      dst[0] = r[0].get<double>();
      dst[1] = r[1].get<double>();
    };
    range("force_x", spec.loads.force_x);
    range("force_y", spec.loads.force_y);
    range("moment", spec.loads.moment);
  }

  spec.analysis = opt_string(j, "analysis", spec.analysis);
  if (spec.analysis != "hull" && spec.analysis != "search" && spec.analysis != "both")
    throw ConfigError(where + ": analysis must be 'hull', 'search', or 'both'");
  spec.per_edge = static_cast<int>(opt_number(j, "per_edge", spec.per_edge, where));
  if (spec.per_edge < 2) throw ConfigError(where + ": per_edge must be >= 2");
  spec.tolerance = opt_number(j, "tolerance", spec.tolerance, where);
  spec.output_dir = opt_string(j, "output_dir", spec.output_dir);
  spec.svg = j.contains("svg") ? j["svg"].get<bool>() : spec.svg;
  spec.threads = static_cast<int>(opt_number(j, "threads", 0, where));
  spec.weights = opt_string(j, "weights", spec.weights);
  if (j.contains("search")) {
    const json& s = j["search"];
    spec.search.starts = static_cast<int>(opt_number(s, "starts", spec.search.starts, where));
    spec.search.max_evaluations_per_start = static_cast<int>(opt_number(
        s, "max_evaluations_per_start", spec.search.max_evaluations_per_start, where));
    spec.search.continuation_steps = static_cast<int>(
        opt_number(s, "continuation_steps", spec.search.continuation_steps, where));
    spec.search.use_gradient = s.contains("use_gradient") && s["use_gradient"].get<bool>();
  }
  return spec;
}

ShapeErrorWeights make_weights(const std::string& kind, std::size_t n) {
  if (kind == "identity") return ShapeErrorWeights::identity(n);
  if (kind == "position") return ShapeErrorWeights::position_only(n);
  if (kind == "tip") return ShapeErrorWeights::tip_only(n);
  throw ConfigError("unknown weights kind '" + kind + "' (expected identity|position|tip)");
}

}  // namespace softarm
