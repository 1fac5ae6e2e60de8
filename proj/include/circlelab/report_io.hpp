#pragma once

// Deterministic output formatting shared by the command line tool and the
// tests: a stable config hash, shortest-roundtrip float printing, CSV
// assembly with a provenance header, and a minimal SVG scatter/line plot.
// Everything here is pure string building; identical inputs produce
// identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "circlelab/version.hpp"

namespace circlelab {

// FNV-1a over the canonical config serialisation.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

// %.17g round-trips every double exactly.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline std::string fmt_i64(long long v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", v);
  return std::string(buf);
}

// Provenance line carried by every CSV and SVG artifact.
inline std::string provenance_comment(const std::string& config_hash) {
  return std::string("circlelab ") + kVersion + " config=" + config_hash;
}

struct CsvBuilder {
  std::string text;

  CsvBuilder(const std::string& config_hash, const std::string& columns) {
    text = "# " + provenance_comment(config_hash) + "\n" + columns + "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += ',';
      text += cells[i];
    }
    text += '\n';
  }
};

// ---------------------------------------------------------------------------
// SVG ratio plot (write only)

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), x > 0 for log axis
};

namespace detail_svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf);
}

}  // namespace detail_svg

// Log-x scatter + polyline plot of ratio-style series.  Axes are linear in y
// and logarithmic in x; the config hash rides along in a comment so plots are
// traceable to the run that produced them.
inline std::string svg_ratio_plot(const std::string& title, const std::string& config_hash,
                                  const std::vector<PlotSeries>& series) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const PlotSeries& s : series)
    for (const auto& [x, y] : s.points) {
      if (x <= 0) continue;
      const double lx = std::log10(x);
      xmin = std::min(xmin, lx); xmax = std::max(xmax, lx);
      ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
  if (xmin > xmax) { xmin = 0; xmax = 1; }
  if (ymin > ymax) { ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
  const double pad = 0.06 * (ymax - ymin);
  ymin -= pad; ymax += pad;

  const auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
  const auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
  out += "<!-- " + provenance_comment(config_hash) + " -->\n";
  out += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"14\">" + title + "</text>\n";

  // frame and gridlines
  out += "<rect x=\"" + detail_svg::num(ml) + "\" y=\"" + detail_svg::num(mt) + "\" width=\"" +
         detail_svg::num(W - ml - mr) + "\" height=\"" + detail_svg::num(H - mt - mb) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double gy = ymin + (ymax - ymin) * i / 4.0;
    out += "<line x1=\"" + detail_svg::num(ml) + "\" y1=\"" + detail_svg::num(py(gy)) +
           "\" x2=\"" + detail_svg::num(W - mr) + "\" y2=\"" + detail_svg::num(py(gy)) +
           "\" stroke=\"#ddd\"/>\n";
    out += "<text x=\"" + detail_svg::num(ml - 6) + "\" y=\"" + detail_svg::num(py(gy) + 4) +
           "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" +
           detail_svg::num(gy) + "</text>\n";
    const double gx = xmin + (xmax - xmin) * i / 4.0;
    out += "<line x1=\"" + detail_svg::num(px(gx)) + "\" y1=\"" + detail_svg::num(mt) +
           "\" x2=\"" + detail_svg::num(px(gx)) + "\" y2=\"" + detail_svg::num(H - mb) +
           "\" stroke=\"#ddd\"/>\n";
    out += "<text x=\"" + detail_svg::num(px(gx)) + "\" y=\"" + detail_svg::num(H - mb + 16) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">1e" +
           detail_svg::num(gx) + "</text>\n";
  }

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* col = colors[si % 4];
    std::string path;
    for (const auto& [x, y] : series[si].points) {
      if (x <= 0) continue;
      path += path.empty() ? "M" : " L";
      path += detail_svg::num(px(std::log10(x))) + " " + detail_svg::num(py(y));
    }
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + col + "\" stroke-width=\"1.5\"/>\n";
    for (const auto& [x, y] : series[si].points) {
      if (x <= 0) continue;
      out += "<circle cx=\"" + detail_svg::num(px(std::log10(x))) + "\" cy=\"" +
             detail_svg::num(py(y)) + "\" r=\"3\" fill=\"" + col + "\"/>\n";
    }
    out += "<text x=\"" + detail_svg::num(ml + 10) + "\" y=\"" +
           detail_svg::num(mt + 16 + 14 * static_cast<double>(si)) +
           "\" font-family=\"monospace\" font-size=\"12\" fill=\"" + col + "\">" +
           series[si].label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace circlelab
