#pragma once

#include <string>
#include <vector>

#include "navfuse/geometry.hpp"

namespace navfuse::svg {

// Minimal self-contained SVG writer; enough for sweep plots and replay
// frames without any display dependency.
class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill,
            double opacity = 1.0);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double stroke_width = 1.0,
                const std::string& dash = "");
  void circle(double cx, double cy, double r, const std::string& fill);
  void text(double x, double y, const std::string& content, double size = 10.0,
            const std::string& anchor = "start");

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double width_;
  double height_;
  std::string body_;
};

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  std::vector<double> yerr;  // optional, one per point
};

// Line plot with axes, ticks and per-series markers.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series);

}  // namespace navfuse::svg
