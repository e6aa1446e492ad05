#include "softarm/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace softarm {

namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

std::vector<Vector3d> dedup(const std::vector<Vector3d>& points) {
  std::map<std::tuple<double, double, double>, bool> seen;
  std::vector<Vector3d> out;
  for (const auto& p : points) {
    auto key = std::make_tuple(p[0], p[1], p[2]);
    if (!seen.count(key)) {
      seen[key] = true;
      out.push_back(p);
    }
  }
  return out;
}

struct AffineFrame {
  Vector3d centroid = Vector3d::Zero();
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();  // columns sorted by spread, descending
  int rank = 0;
};

AffineFrame affine_frame(const std::vector<Vector3d>& pts) {
  AffineFrame f;
  for (const auto& p : pts) f.centroid += p;
  f.centroid /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Vector3d d = p - f.centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  // Eigen orders ascending; flip to descending spread.
  for (int i = 0; i < 3; ++i) f.axes.col(i) = es.eigenvectors().col(2 - i);
  // (1e-6 relative spread)^2. The eigensolver's own noise floor is around
  // 1e-16 * lambda_max, so anything below this threshold is numerically flat.
  const double thresh = std::max(cov.trace(), 1e-300) * 1e-12;
  for (int i = 0; i < 3; ++i)
    if (es.eigenvalues()[2 - i] > thresh) ++f.rank;
  return f;
}

// ---- 2D hull (monotone chain), returns CCW vertex indices into pts ----

std::vector<int> hull_2d(const std::vector<Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    return pts[a][1] < pts[b][1];
  });
  auto cross = [&](int o, int a, int b) {
    const Vector2d u = pts[a] - pts[o], v = pts[b] - pts[o];
    return u[0] * v[1] - u[1] * v[0];
  };
  std::vector<int> h(2 * n);
  int k = 0;
  for (int ii = 0; ii < n; ++ii) {  // lower
    const int i = order[ii];
    while (k >= 2 && cross(h[k - 2], h[k - 1], i) <= 0) --k;
    h[k++] = i;
  }
  for (int ii = n - 2, lower = k + 1; ii >= 0; --ii) {  // upper
    const int i = order[ii];
    while (k >= lower && cross(h[k - 2], h[k - 1], i) <= 0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

// ---- 3D quickhull for genuinely full-rank point sets ----

struct Face {
  int a, b, c;
  Vector3d normal;  // unit, outward
  double offset;    // dot(normal, vertex)
  std::vector<int> outside;
  bool alive = true;
};

Face make_face(int a, int b, int c, const std::vector<Vector3d>& P, const Vector3d& interior) {
  Face f;
  f.a = a; f.b = b; f.c = c;
  Vector3d n = (P[b] - P[a]).cross(P[c] - P[a]);
  const double len = n.norm();
  if (len <= 0.0) throw std::runtime_error("quickhull: degenerate face");
  n /= len;
  if (n.dot(interior - P[a]) > 0) {  // flip to outward
    std::swap(f.b, f.c);
    n = -n;
  }
  f.normal = n;
  f.offset = n.dot(P[f.a]);
  return f;
}

WrenchHull quickhull_3d(const std::vector<Vector3d>& P) {
  const int n = static_cast<int>(P.size());
  double scale = 0.0;
  for (const auto& p : P) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = std::max(scale, 1.0) * 1e-12 * 64;

  // Initial simplex: farthest pair among axis extremes, then line/plane extremes.
  int i0 = 0, i1 = 0;
  double best = -1.0;
  std::vector<int> extremes;
  for (int axis = 0; axis < 3; ++axis) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (P[i][axis] < P[lo][axis]) lo = i;
      if (P[i][axis] > P[hi][axis]) hi = i;
    }
    extremes.push_back(lo);
    extremes.push_back(hi);
  }
  for (int u : extremes)
    for (int v : extremes) {
      const double d = (P[u] - P[v]).squaredNorm();
      if (d > best) { best = d; i0 = u; i1 = v; }
    }
  int i2 = -1;
  best = -1.0;
  const Vector3d dir = (P[i1] - P[i0]).normalized();
  for (int i = 0; i < n; ++i) {
    const Vector3d d = P[i] - P[i0];
    const double dist = (d - d.dot(dir) * dir).squaredNorm();
    if (dist > best) { best = dist; i2 = i; }
  }
  int i3 = -1;
  best = -1.0;
  const Vector3d pn = (P[i1] - P[i0]).cross(P[i2] - P[i0]);
  for (int i = 0; i < n; ++i) {
    const double dist = std::abs(pn.dot(P[i] - P[i0]));
    if (dist > best) { best = dist; i3 = i; }
  }
  const Vector3d interior = (P[i0] + P[i1] + P[i2] + P[i3]) / 4.0;

  std::vector<Face> faces;
  faces.push_back(make_face(i0, i1, i2, P, interior));
  faces.push_back(make_face(i0, i1, i3, P, interior));
  faces.push_back(make_face(i0, i2, i3, P, interior));
  faces.push_back(make_face(i1, i2, i3, P, interior));

  auto assign = [&](int point, std::size_t first_face) {
    for (std::size_t fi = first_face; fi < faces.size(); ++fi) {
      Face& f = faces[fi];
      if (!f.alive) continue;
      if (f.normal.dot(P[point]) - f.offset > eps) {
        f.outside.push_back(point);
        return;
      }
    }
  };
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    assign(i, 0);
  }

  for (int guard = 0; guard < 16 * n + 64; ++guard) {
    int fi = -1;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].alive && !faces[f].outside.empty()) { fi = static_cast<int>(f); break; }
    if (fi < 0) break;

    // Farthest outside point of this face.
    Face& fsel = faces[fi];
    int apex = fsel.outside[0];
    double far = -1.0;
    for (int p : fsel.outside) {
      const double d = fsel.normal.dot(P[p]) - fsel.offset;
      if (d > far) { far = d; apex = p; }
    }

    // Visible faces and their orphaned outside sets.
    std::vector<int> orphans;
    std::map<std::pair<int, int>, int> edge_count;
    for (auto& f : faces) {
      if (!f.alive) continue;
      if (f.normal.dot(P[apex]) - f.offset > eps) {
        f.alive = false;
        for (int p : f.outside)
          if (p != apex) orphans.push_back(p);
        f.outside.clear();
        ++edge_count[{f.a, f.b}];
        ++edge_count[{f.b, f.c}];
        ++edge_count[{f.c, f.a}];
      }
    }
    // Horizon: directed edges whose reverse was not also visible.
    const std::size_t first_new = faces.size();
    for (const auto& [e, cnt] : edge_count) {
      (void)cnt;
      if (edge_count.count({e.second, e.first})) continue;
      faces.push_back(make_face(e.first, e.second, apex, P, interior));
    }
    for (int p : orphans) assign(p, first_new);
  }

  WrenchHull hull;
  hull.degenerate_rank = 3;
  std::map<int, int> remap;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    for (int v : {f.a, f.b, f.c})
      if (!remap.count(v)) {
        remap[v] = static_cast<int>(hull.vertices.size());
        hull.vertices.push_back(P[v]);
      }
  }
  for (const auto& f : faces)
    if (f.alive) hull.facets.push_back({remap[f.a], remap[f.b], remap[f.c]});
  return hull;
}

}  // namespace

double WrenchHull::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      best = std::max(best, (vertices[i] - vertices[j]).norm());
  return best;
}

bool WrenchHull::contains(const Eigen::Vector3d& p, double tol) const {
  if (vertices.empty()) return false;
  switch (degenerate_rank) {
    case 0:
      return (p - vertices[0]).norm() <= tol;
    case 1: {
      const Vector3d a = vertices.front(), b = vertices.back();
      const Vector3d d = b - a;
      const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
      return (p - (a + t * d)).norm() <= tol;
    }
    case 2: {
      // Plane membership, then CCW edge half-planes.
      const Vector3d u = (vertices[1] - vertices[0]).normalized();
      Vector3d nrm = Vector3d::Zero();
      for (std::size_t i = 2; i < vertices.size(); ++i) {
        nrm = (vertices[1] - vertices[0]).cross(vertices[i] - vertices[0]);
        if (nrm.norm() > 0) break;
      }
      if (nrm.norm() == 0) return false;
      nrm.normalize();
      if (std::abs(nrm.dot(p - vertices[0])) > tol) return false;
      const Vector3d v = nrm.cross(u);
      auto uv = [&](const Vector3d& q) {
        return Vector2d((q - vertices[0]).dot(u), (q - vertices[0]).dot(v));
      };
      // The ring's winding in this ad-hoc basis is not fixed; orient by area.
      double area2 = 0.0;
      for (const auto& e : edges) {
        const Vector2d a = uv(vertices[e[0]]), b = uv(vertices[e[1]]);
        area2 += a[0] * b[1] - a[1] * b[0];
      }
      const double orient = area2 >= 0 ? 1.0 : -1.0;
      const Vector2d q = uv(p);
      for (const auto& e : edges) {
        const Vector2d a = uv(vertices[e[0]]), b = uv(vertices[e[1]]);
        const Vector2d t = (b - a).normalized();
        const Vector2d outward(orient * t[1], -orient * t[0]);
        if (outward.dot(q - a) > tol) return false;
      }
      return true;
    }
    default:
      for (const auto& f : facets) {
        const Vector3d a = vertices[f[0]];
        const Vector3d n = (vertices[f[1]] - a).cross(vertices[f[2]] - a).normalized();
        if (n.dot(p - a) > tol) return false;
      }
      return true;
  }
}

WrenchHull build_hull(const std::vector<Eigen::Vector3d>& points) {
  if (points.empty()) throw std::runtime_error("build_hull: empty point set");
  const std::vector<Vector3d> P = dedup(points);

  if (P.size() == 1) {
    WrenchHull h;
    h.vertices = P;
    h.degenerate_rank = 0;
    return h;
  }

  const AffineFrame frame = affine_frame(P);
  if (frame.rank <= 1) {
    // Segment along the dominant axis.
    const Vector3d d = frame.axes.col(0);
    double lo = std::numeric_limits<double>::max(), hi = -lo;
    int ilo = 0, ihi = 0;
    for (std::size_t i = 0; i < P.size(); ++i) {
      const double t = d.dot(P[i] - frame.centroid);
      if (t < lo) { lo = t; ilo = static_cast<int>(i); }
      if (t > hi) { hi = t; ihi = static_cast<int>(i); }
    }
    WrenchHull h;
    if (ilo == ihi || (P[ihi] - P[ilo]).norm() == 0.0) {
      h.vertices = {P[ilo]};
      h.degenerate_rank = 0;
      return h;
    }
    h.vertices = {P[ilo], P[ihi]};
    h.edges = {{0, 1}};
    h.degenerate_rank = 1;
    return h;
  }

  if (frame.rank == 2) {
    std::vector<Vector2d> uv(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
      const Vector3d d = P[i] - frame.centroid;
      uv[i] = Vector2d(frame.axes.col(0).dot(d), frame.axes.col(1).dot(d));
    }
    const std::vector<int> ring = hull_2d(uv);
    WrenchHull h;
    h.degenerate_rank = 2;
    for (int idx : ring) h.vertices.push_back(P[idx]);
    for (std::size_t i = 0; i < h.vertices.size(); ++i)
      h.edges.push_back({static_cast<int>(i), static_cast<int>((i + 1) % h.vertices.size())});
    return h;
  }

  return quickhull_3d(P);
}

}  // namespace softarm
