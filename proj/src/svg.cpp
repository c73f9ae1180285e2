#include "navfuse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "navfuse/errors.hpp"

namespace navfuse::svg {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, const std::string& fill,
                    double opacity) {
  body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
           "\" height=\"" + fmt(h) + "\" fill=\"" + fill + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + fmt(opacity) + "\"";
  body_ += "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double stroke_width) {
  body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
           "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           fmt(stroke_width) + "\"/>\n";
}

void Document::polyline(const std::vector<std::pair<double, double>>& pts,
                        const std::string& stroke, double stroke_width,
                        const std::string& dash) {
  if (pts.size() < 2) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           fmt(stroke_width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
  body_ += " points=\"";
  for (const auto& [x, y] : pts) body_ += fmt(x) + "," + fmt(y) + " ";
  body_ += "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill) {
  body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
           "\" fill=\"" + fill + "\"/>\n";
}

void Document::text(double x, double y, const std::string& content, double size,
                    const std::string& anchor) {
  body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + fmt(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + content +
           "</text>\n";
}

std::string Document::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
         "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " +
         fmt(height_) + "\">\n" + body_ + "</svg>\n";
}

void Document::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("svg: cannot write " + path);
  out << str();
}

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series) {
  const double W = 480, H = 360;
  const double ml = 60, mr = 20, mt = 36, mb = 48;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& [x, y] = s.points[i];
      const double e = i < s.yerr.size() ? s.yerr[i] : 0.0;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y - e);
      ymax = std::max(ymax, y + e);
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  Document doc(W, H);
  doc.rect(0, 0, W, H, "#ffffff");
  doc.text(W / 2, mt - 14, title, 13, "middle");
  doc.line(ml, H - mb, W - mr, H - mb, "#000000");
  doc.line(ml, mt, ml, H - mb, "#000000");
  doc.text(W / 2, H - 10, xlabel, 11, "middle");
  doc.text(14, H / 2, ylabel, 11, "middle");

  const int ticks = 5;
  char buf[32];
  for (int i = 0; i <= ticks; ++i) {
    const double x = xmin + (xmax - xmin) * i / ticks;
    const double y = ymin + (ymax - ymin) * i / ticks;
    doc.line(px(x), H - mb, px(x), H - mb + 4, "#000000");
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    doc.text(px(x), H - mb + 16, buf, 9, "middle");
    doc.line(ml - 4, py(y), ml, py(y), "#000000");
    std::snprintf(buf, sizeof(buf), "%.3g", y);
    doc.text(ml - 8, py(y) + 3, buf, 9, "end");
  }

  int legend_row = 0;
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(s.points.size());
    for (const auto& [x, y] : s.points) pts.emplace_back(px(x), py(y));
    doc.polyline(pts, s.color, 1.5);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      doc.circle(pts[i].first, pts[i].second, 2.5, s.color);
      if (i < s.yerr.size() && s.yerr[i] > 0.0) {
        const double y0 = py(s.points[i].second - s.yerr[i]);
        const double y1 = py(s.points[i].second + s.yerr[i]);
        doc.line(pts[i].first, y0, pts[i].first, y1, s.color, 1.0);
      }
    }
    if (!s.label.empty()) {
      const double ly = mt + 12 + 14 * legend_row++;
      doc.line(W - mr - 90, ly - 3, W - mr - 70, ly - 3, s.color, 2.0);
      doc.text(W - mr - 64, ly, s.label, 10);
    }
  }
  doc.save(path);
}

}  // namespace navfuse::svg
