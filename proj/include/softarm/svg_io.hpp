#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "softarm/convex_hull.hpp"
#include "softarm/planar.hpp"

namespace softarm {

// Minimal SVG canvas with a world-to-pixel transform.  World y grows upward
// (SVG y grows downward), and the world box is fitted into the pixel box with
// a uniform scale so shapes are not distorted.
class SvgCanvas {
 public:
  SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width_px = 640,
            int height_px = 480, int margin_px = 40);

  void polyline(const std::vector<std::array<double, 2>>& points,
                const std::string& stroke, double stroke_width = 1.5);
  void polygon(const std::vector<std::array<double, 2>>& points,
               const std::string& fill, const std::string& stroke,
               double opacity = 0.35);
  void circle(double x, double y, double radius_px, const std::string& fill);
  void text(double x, double y, const std::string& label, int font_px = 12,
            const std::string& fill = "#333333");
  // Draws the world x/y axes (if they cross the box) plus a frame.
  void axes();

  void save(const std::filesystem::path& file) const;

 private:
  double px(double x) const;
  double py(double y) const;

  double xmin_, xmax_, ymin_, ymax_;
  int width_, height_, margin_;
  double scale_;
  std::vector<std::string> body_;
};

// Renders achieved vs. target centerlines (target dashed) with node markers.
void write_shape_svg(const std::filesystem::path& file,
                     const std::vector<Pose>& achieved,
                     const std::vector<Pose>* target = nullptr,
                     const std::string& title = "");

// Renders one polygon per hull: the projection onto the (fx, m) plane, drawn
// on shared axes.  The shear axis is dropped because the frozen-shape wrench
// maps leave it pressure-independent, so the hulls are flat along it anyway.
void write_hull_svg(const std::filesystem::path& file,
                    const std::vector<WrenchHull>& hulls,
                    const std::string& title = "");

// Bar histogram of the finite entries of `values` with a median marker.
void write_histogram_svg(const std::filesystem::path& file,
                         const std::vector<double>& values, int bins = 20,
                         const std::string& title = "");

}  // namespace softarm
