#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "softarm/convex_hull.hpp"
#include "softarm/planar.hpp"

namespace softarm {

// Formats a double with 17 significant digits so that re-parsing recovers the
// exact bit pattern.  All CSV output goes through this to keep files
// byte-for-byte reproducible across runs.
std::string format_double(double value);

std::string join_csv(const std::vector<std::string>& cells);

// Writes one vertex table for a family of per-node hulls.  Columns:
//   node,vertex,fx,fy,m
// where `node` is the 1-based arm node index and `vertex` enumerates the hull
// vertices of that node in stored order.
void write_hull_csv(const std::filesystem::path& file,
                    const std::vector<WrenchHull>& hulls);

// Reads a vertex table written by write_hull_csv back into per-node vertex
// lists (index 0 -> node 1).  Throws std::runtime_error on malformed input.
std::vector<std::vector<Wrench>> read_hull_csv(const std::filesystem::path& file);

}  // namespace softarm
