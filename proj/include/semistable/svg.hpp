#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

// Minimal static SVG line plots: axes, ticks, polylines, a legend.  This is
// a convenience rendering of data that also ships as CSV; the CSV is the
// canonical artifact.  Output is deterministic text.

namespace semistable::io {

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#1f6fb2";
  std::string label;
  double stroke_width = 1.5;
  bool dashed = false;
};

class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)),
        x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  void add_series(SvgSeries s) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw std::invalid_argument("SvgPlot: series needs matching nonempty x/y");
    series_.push_back(std::move(s));
  }

  std::string render() const {
    if (series_.empty()) throw std::logic_error("SvgPlot: nothing to draw");
    double x0 = series_[0].x[0], x1 = x0, y0 = series_[0].y[0], y1 = y0;
    for (const auto& s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.y[i]);
        y1 = std::max(y1, s.y[i]);
      }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const double pad_y = 0.05 * (y1 - y0);
    y0 -= pad_y;
    y1 += pad_y;

    const double W = 640, H = 420, ml = 62, mr = 16, mt = 34, mb = 46;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"420\" viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">" +
           escape(title_) + "</text>\n";

    // axes box and ticks
    svg += rect(ml, mt, pw, ph);
    for (int i = 0; i <= 5; ++i) {
      const double fx = x0 + (x1 - x0) * i / 5.0;
      const double fy = y0 + (y1 - y0) * i / 5.0;
      svg += line(px(fx), mt + ph, px(fx), mt + ph + 4);
      svg += text(px(fx), mt + ph + 17, fmt(fx), "middle");
      svg += line(ml - 4, py(fy), ml, py(fy));
      svg += text(ml - 7, py(fy) + 3.5, fmt(fy), "end");
    }
    svg += text(ml + pw / 2, H - 8, escape(x_label_), "middle");
    svg += "<text x=\"14\" y=\"" + fmt(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 14 " +
           fmt(mt + ph / 2) + ")\">" + escape(y_label_) + "</text>\n";

    double legend_y = mt + 14;
    for (const auto& s : series_) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) pts += ' ';
        pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
      }
      svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"" +
             fmt(s.stroke_width) + "\"" +
             (s.dashed ? std::string(" stroke-dasharray=\"6 4\"") : "") +
             " points=\"" + pts + "\"/>\n";
      if (!s.label.empty()) {
        svg += line_colored(ml + pw - 150, legend_y - 4, ml + pw - 126,
                            legend_y - 4, s.color, s.dashed);
        svg += text(ml + pw - 120, legend_y, escape(s.label), "start");
        legend_y += 16;
      }
    }
    svg += "</svg>\n";
    return svg;
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    const std::string body = render();
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw std::runtime_error("failed writing output file: " + path);
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '<') out += "&lt;";
      else if (ch == '>') out += "&gt;";
      else if (ch == '&') out += "&amp;";
      else out += ch;
    }
    return out;
  }
  static std::string rect(double x, double y, double w, double h) {
    return "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
           "\" height=\"" + fmt(h) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  }
  static std::string line(double x1, double y1, double x2, double y2) {
    return line_colored(x1, y1, x2, y2, "#444444", false);
  }
  static std::string line_colored(double x1, double y1, double x2, double y2,
                                  const std::string& color, bool dashed) {
    return "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
           fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"" +
           (dashed ? std::string(" stroke-dasharray=\"6 4\"") : "") + "/>\n";
  }
  static std::string text(double x, double y, const std::string& body,
                          const std::string& anchor) {
    return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" +
           anchor +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + body +
           "</text>\n";
  }

  std::string title_, x_label_, y_label_;
  std::vector<SvgSeries> series_;
};

}  // namespace semistable::io
