#include "softarm/svg_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace softarm {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << v;
  return os.str();
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Matplotlib-style categorical palette, cycled per node.
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

// Monotone-chain convex hull of 2D points, CCW without a repeated endpoint.
// Collinear/duplicate points are dropped; fewer than three distinct points
// come back as-is (the caller degrades polygon -> polyline -> dot).
std::vector<std::array<double, 2>> hull_2d(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> ring(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(ring[k - 2], ring[k - 1], pts[i]) <= 0.0) --k;
    ring[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(ring[k - 2], ring[k - 1], pts[i]) <= 0.0) --k;
    ring[k++] = pts[i];
  }
  ring.resize(k - 1);  // the last point repeats the first
  return ring;
}

}  // namespace

SvgCanvas::SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width_px,
                     int height_px, int margin_px)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width_px),
      height_(height_px), margin_(margin_px) {
  const double span_x = std::max(xmax_ - xmin_, 1e-9);
  const double span_y = std::max(ymax_ - ymin_, 1e-9);
  const double sx = (width_ - 2.0 * margin_) / span_x;
  const double sy = (height_ - 2.0 * margin_) / span_y;
  scale_ = std::min(sx, sy);
}

double SvgCanvas::px(double x) const { return margin_ + (x - xmin_) * scale_; }

double SvgCanvas::py(double y) const { return height_ - margin_ - (y - ymin_) * scale_; }

void SvgCanvas::polyline(const std::vector<std::array<double, 2>>& points,
                         const std::string& stroke, double stroke_width) {
  if (points.size() < 2) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
     << stroke_width << "\" points=\"";
  for (const auto& p : points) os << num(px(p[0])) << ',' << num(py(p[1])) << ' ';
  os << "\"/>";
  body_.push_back(os.str());
}

void SvgCanvas::polygon(const std::vector<std::array<double, 2>>& points,
                        const std::string& fill, const std::string& stroke,
                        double opacity) {
  if (points.size() < 3) return;
  std::ostringstream os;
  os << "<polygon fill=\"" << fill << "\" fill-opacity=\"" << opacity
     << "\" stroke=\"" << stroke << "\" points=\"";
  for (const auto& p : points) os << num(px(p[0])) << ',' << num(py(p[1])) << ' ';
  os << "\"/>";
  body_.push_back(os.str());
}

void SvgCanvas::circle(double x, double y, double radius_px, const std::string& fill) {
  std::ostringstream os;
  os << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\""
     << radius_px << "\" fill=\"" << fill << "\"/>";
  body_.push_back(os.str());
}

void SvgCanvas::text(double x, double y, const std::string& label, int font_px,
                     const std::string& fill) {
  std::ostringstream os;
  os << "<text x=\"" << num(px(x)) << "\" y=\"" << num(py(y)) << "\" font-size=\""
     << font_px << "\" font-family=\"sans-serif\" fill=\"" << fill << "\">" << label
     << "</text>";
  body_.push_back(os.str());
}

void SvgCanvas::axes() {
  std::ostringstream os;
  os << "<rect x=\"" << margin_ << "\" y=\"" << margin_ << "\" width=\""
     << width_ - 2 * margin_ << "\" height=\"" << height_ - 2 * margin_
     << "\" fill=\"none\" stroke=\"#cccccc\"/>";
  body_.push_back(os.str());
  if (xmin_ < 0.0 && xmax_ > 0.0)
    polyline({{0.0, ymin_}, {0.0, ymax_}}, "#bbbbbb", 0.8);
  if (ymin_ < 0.0 && ymax_ > 0.0)
    polyline({{xmin_, 0.0}, {xmax_, 0.0}}, "#bbbbbb", 0.8);
}

void SvgCanvas::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
      << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& el : body_) out << el << '\n';
  out << "</svg>\n";
}

void write_shape_svg(const std::filesystem::path& file,
                     const std::vector<Pose>& achieved, const std::vector<Pose>* target,
                     const std::string& title) {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  auto grow = [&](const std::vector<Pose>& ps) {
    for (const auto& p : ps) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  };
  grow(achieved);
  if (target) grow(*target);
  const double pad = 0.1 * std::max({xmax - xmin, ymax - ymin, 1e-3});
  SvgCanvas canvas(xmin - pad, xmax + pad, ymin - pad, ymax + pad);
  canvas.axes();
  auto line = [](const std::vector<Pose>& ps) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(ps.size());
    for (const auto& p : ps) pts.push_back({p.x, p.y});
    return pts;
  };
  if (target) canvas.polyline(line(*target), "#d62728", 1.2);
  canvas.polyline(line(achieved), "#1f77b4", 2.0);
  for (const auto& p : achieved) canvas.circle(p.x, p.y, 3.0, "#1f77b4");
  if (target)
    for (const auto& p : *target) canvas.circle(p.x, p.y, 2.0, "#d62728");
  if (!title.empty())
    canvas.text(xmin - pad * 0.5, ymax + pad * 0.5, title, 13);
  canvas.save(file);
}

void write_hull_svg(const std::filesystem::path& file,
                    const std::vector<WrenchHull>& hulls, const std::string& title) {
  // Project every vertex onto (fx, m) first so all hulls share one frame.
  std::vector<std::vector<std::array<double, 2>>> rings;
  rings.reserve(hulls.size());
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  for (const WrenchHull& h : hulls) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(h.vertices.size());
    for (const auto& v : h.vertices) {
      pts.push_back({v.x(), v.z()});
      xmin = std::min(xmin, v.x());
      xmax = std::max(xmax, v.x());
      ymin = std::min(ymin, v.z());
      ymax = std::max(ymax, v.z());
    }
    rings.push_back(hull_2d(std::move(pts)));
  }
  const double pad = 0.1 * std::max({xmax - xmin, ymax - ymin, 1e-3});
  SvgCanvas canvas(xmin - pad, xmax + pad, ymin - pad, ymax + pad);
  canvas.axes();
  for (std::size_t k = 0; k < rings.size(); ++k) {
    const auto& ring = rings[k];
    if (ring.empty()) continue;
    const std::string color = kPalette[k % kPaletteSize];
    if (ring.size() >= 3)
      canvas.polygon(ring, color, color, 0.25);
    else if (ring.size() == 2)
      canvas.polyline(ring, color, 1.5);
    else
      canvas.circle(ring[0][0], ring[0][1], 3.0, color);
    double cx = 0.0, cy = 0.0;
    for (const auto& p : ring) {
      cx += p[0] / static_cast<double>(ring.size());
      cy += p[1] / static_cast<double>(ring.size());
    }
    // Node labels match the 1-based node column of the hull CSV tables.
    canvas.text(cx, cy, "n" + std::to_string(k + 1), 10, color);
  }
  canvas.text(xmax + pad - 0.12 * (xmax - xmin + 2.0 * pad), ymin - pad * 0.3, "fx", 11,
              "#555555");
  canvas.text(xmin - pad * 0.5, ymax + pad * 0.1, "m", 11, "#555555");
  if (!title.empty())
    canvas.text(xmin - pad * 0.5, ymax + pad * 0.5, title, 13);
  canvas.save(file);
}

void write_histogram_svg(const std::filesystem::path& file,
                         const std::vector<double>& values, int bins,
                         const std::string& title) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  // Bars live in a normalized [0, 1.4] x [0, 1] box (the canvas's inner aspect
  // ratio), so the uniform world-to-pixel scale fills the frame; real data
  // coordinates appear only in the text labels.
  SvgCanvas canvas(0.0, 1.4, 0.0, 1.0);
  canvas.axes();
  if (!title.empty()) canvas.text(-0.07, 1.05, title, 13);
  if (v.empty()) {
    canvas.text(0.6, 0.5, "no data", 13, "#888888");
    canvas.save(file);
    return;
  }
  std::sort(v.begin(), v.end());
  double lo = v.front(), hi = v.back();
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const int nbins = std::max(bins, 1);
  std::vector<int> counts(static_cast<std::size_t>(nbins), 0);
  for (double x : v) {
    const int b = std::min(nbins - 1,
                           static_cast<int>((x - lo) / (hi - lo) * nbins));
    ++counts[static_cast<std::size_t>(std::max(b, 0))];
  }
  const int cmax = *std::max_element(counts.begin(), counts.end());
  for (int i = 0; i < nbins; ++i) {
    if (counts[static_cast<std::size_t>(i)] == 0) continue;
    const double x0 = 1.4 * i / nbins;
    const double x1 = 1.4 * (i + 1) / nbins;
    const double h = static_cast<double>(counts[static_cast<std::size_t>(i)]) / cmax;
    canvas.polygon({{x0, 0.0}, {x1, 0.0}, {x1, h}, {x0, h}}, "#1f77b4", "#1f77b4", 0.6);
  }
  const double med = 0.5 * (v[(v.size() - 1) / 2] + v[v.size() / 2]);
  const double xm = std::clamp(1.4 * (med - lo) / (hi - lo), 0.0, 1.4);
  canvas.polyline({{xm, 0.0}, {xm, 1.02}}, "#d62728", 1.5);
  canvas.text(std::min(xm + 0.02, 1.05), 1.02, "median " + label(med), 11, "#d62728");
  canvas.text(0.0, -0.05, label(lo), 11, "#555555");
  canvas.text(1.28, -0.05, label(hi), 11, "#555555");
  canvas.text(1.2, 1.05, "n=" + std::to_string(v.size()), 11, "#555555");
  canvas.save(file);
}

}  // namespace softarm
