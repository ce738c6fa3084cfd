#pragma once

// Minimal SVG 1.1 chart writer: scatter, polyline, step curve and heatmap.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace spinex::svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Five-stop viridis approximation, t in [0, 1].
inline std::string color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  if (!std::isfinite(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), 3);
  const double f = t - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 0.0) {
      const double pad = std::abs(lo) > 0 ? 0.05 * std::abs(lo) : 0.5;
      lo -= pad;
      hi += pad;
    }
  }
};

class Chart {
 public:
  Chart(std::string title, std::string xlabel, std::string ylabel, bool log_y = false)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), log_y_(log_y) {}

  struct Point {
    double x, y;
    std::string fill;
    double r;
  };
  struct Line {
    std::vector<double> xs, ys;
    std::string stroke;
    bool step;
    std::string label;
  };

  void point(double x, double y, const std::string& fill = "#3b528b", double r = 3.0) {
    points_.push_back({x, y, fill, r});
  }
  void line(std::vector<double> xs, std::vector<double> ys, const std::string& stroke, bool step = false,
            std::string label = {}) {
    lines_.push_back({std::move(xs), std::move(ys), stroke, step, std::move(label)});
  }
  void vline(double x) { vlines_.push_back(x); }
  void hline(double y) { hlines_.push_back(y); }
  void note(std::string s) { notes_.push_back(std::move(s)); }

  std::string str() const {
    Range xr, yr;
    for (const auto& p : points_) {
      xr.add(p.x);
      yr.add(ty(p.y));
    }
    for (const auto& l : lines_) {
      for (double v : l.xs) xr.add(v);
      for (double v : l.ys) yr.add(ty(v));
    }
    for (double v : vlines_) xr.add(v);
    for (double v : hlines_) yr.add(ty(v));
    xr.finalize();
    yr.finalize();
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * kPlotW; };
    auto sy = [&](double y) { return kTop + kPlotH - (ty(y) - yr.lo) / (yr.hi - yr.lo) * kPlotH; };

    std::ostringstream os;
    header(os);
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
      const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
      os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << kTop + kPlotH + 16
         << "\" font-size=\"10\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
      const double ylab = log_y_ ? std::pow(10.0, fy) : fy;
      os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(kTop + kPlotH - k / 4.0 * kPlotH + 3)
         << "\" font-size=\"10\" text-anchor=\"end\">" << tick(ylab) << "</text>\n";
    }
    for (double v : vlines_)
      os << "<line x1=\"" << num(sx(v)) << "\" y1=\"" << kTop << "\" x2=\"" << num(sx(v)) << "\" y2=\""
         << kTop + kPlotH << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    for (double v : hlines_)
      os << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << kLeft + kPlotW << "\" y2=\""
         << num(sy(v)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    int legend = 0;
    for (const auto& l : lines_) {
      os << "<polyline fill=\"none\" stroke=\"" << l.stroke << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < l.xs.size(); ++i) {
        if (!std::isfinite(ty(l.ys[i]))) continue;
        if (l.step && i > 0) os << num(sx(l.xs[i])) << ',' << num(sy(l.ys[i - 1])) << ' ';
        os << num(sx(l.xs[i])) << ',' << num(sy(l.ys[i])) << ' ';
      }
      os << "\"/>\n";
      if (!l.label.empty()) {
        const int y = kTop + 14 + 14 * legend++;
        os << "<text x=\"" << kLeft + kPlotW - 4 << "\" y=\"" << y << "\" font-size=\"11\" text-anchor=\"end\" fill=\""
           << l.stroke << "\">" << escape(l.label) << "</text>\n";
      }
    }
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(ty(p.y))) continue;
      os << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"" << num(p.r) << "\" fill=\""
         << p.fill << "\"/>\n";
    }
    footer(os);
    return os.str();
  }

 private:
  static constexpr int kWidth = 640, kHeight = 480, kLeft = 70, kTop = 40, kPlotW = 540, kPlotH = 380;

  double ty(double y) const {
    if (!log_y_) return y;
    return y > 0 ? std::log10(y) : std::numeric_limits<double>::quiet_NaN();
  }

  static std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  void header(std::ostringstream& os) const {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" << escape(title_)
       << "</text>\n"
       << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 8 << "\" font-size=\"12\" text-anchor=\"middle\">"
       << escape(xlabel_) << "</text>\n"
       << "<text x=\"14\" y=\"" << kTop + kPlotH / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << kTop + kPlotH / 2 << ")\">" << escape(ylabel_ + (log_y_ ? " (log)" : "")) << "</text>\n";
    int y = kTop + 14;
    for (const auto& n : notes_) {
      os << "<text x=\"" << kLeft + 6 << "\" y=\"" << y << "\" font-size=\"11\">" << escape(n) << "</text>\n";
      y += 14;
    }
  }
  static void footer(std::ostringstream& os) { os << "</svg>\n"; }

  std::string title_, xlabel_, ylabel_;
  bool log_y_;
  std::vector<Point> points_;
  std::vector<Line> lines_;
  std::vector<double> vlines_, hlines_;
  std::vector<std::string> notes_;
};

// Row-major values, one cell per entry, colored over [lo, hi].
inline std::string heatmap(const std::string& title, std::size_t rows, std::size_t cols, const std::vector<double>& values,
                           double lo, double hi) {
  const double size = 440.0;
  const double cell = rows && cols ? size / static_cast<double>(std::max(rows, cols)) : size;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"560\" height=\"520\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"280\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = values[i * cols + j];
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
      os << "<rect x=\"" << num(40 + static_cast<double>(j) * cell) << "\" y=\"" << num(40 + static_cast<double>(i) * cell)
         << "\" width=\"" << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"" << color(t) << "\"/>\n";
    }
  for (int k = 0; k <= 10; ++k) {
    const double t = 1.0 - k / 10.0;
    os << "<rect x=\"500\" y=\"" << 40 + k * 40 << "\" width=\"20\" height=\"40\" fill=\"" << color(t) << "\"/>\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", hi);
  os << "<text x=\"526\" y=\"50\" font-size=\"10\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.3g", lo);
  os << "<text x=\"526\" y=\"478\" font-size=\"10\">" << buf << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace spinex::svg
