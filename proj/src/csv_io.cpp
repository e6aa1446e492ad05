#include "softarm/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace softarm {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

void write_hull_csv(const std::filesystem::path& file,
                    const std::vector<WrenchHull>& hulls) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
  out << "node,vertex,fx,fy,m\n";
  for (std::size_t n = 0; n < hulls.size(); ++n) {
    const auto& verts = hulls[n].vertices;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      out << (n + 1) << ',' << v << ',' << format_double(verts[v].x()) << ','
          << format_double(verts[v].y()) << ',' << format_double(verts[v].z()) << '\n';
    }
  }
}

std::vector<std::vector<Wrench>> read_hull_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error(file.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != "node,vertex,fx,fy,m")
    throw std::runtime_error(file.string() + ": missing or unexpected header row");
  std::vector<std::vector<Wrench>> nodes;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (...) {
        throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                 ": bad value '" + cell + "'");
      }
    }
    if (vals.size() != 5)
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                               ": expected 5 cells");
    const std::size_t node = static_cast<std::size_t>(vals[0]);
    if (node < 1)
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                               ": node index must be >= 1");
    if (nodes.size() < node) nodes.resize(node);
    nodes[node - 1].push_back({vals[2], vals[3], vals[4]});
  }
  return nodes;
}

}  // namespace softarm
