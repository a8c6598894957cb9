#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "svg.hpp"

namespace sscool::cli {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kW = 720, kH = 480, kL = 70, kR = 20, kT = 20, kB = 50;

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string svg_plot(const std::vector<Series>& series, bool log_y, const std::string& x_label,
                     const std::string& y_label) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : std::nan("")) : s.y[i];
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-300) {
    xmin -= 1;
    xmax += 1;
  }
  if (ymax - ymin < 1e-300) {
    ymin -= 1;
    ymax += 1;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
  auto py = [&](double yv) { return kH - kB - (yv - ymin) / (ymax - ymin) * (kH - kT - kB); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
  svg += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  svg += "<line x1=\"70\" y1=\"430\" x2=\"700\" y2=\"430\" stroke=\"black\"/>\n";
  svg += "<line x1=\"70\" y1=\"20\" x2=\"70\" y2=\"430\" stroke=\"black\"/>\n";

  for (int i = 0; i < 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double p = px(xv);
    svg += "<line x1=\"" + fmt("%.2f", p) + "\" y1=\"430\" x2=\"" + fmt("%.2f", p) +
           "\" y2=\"436\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", p) +
           "\" y=\"450\" font-size=\"12\" text-anchor=\"middle\">" + fmt("%.3g", xv) +
           "</text>\n";
  }
  if (log_y) {
    const int d0 = static_cast<int>(std::ceil(ymin)), d1 = static_cast<int>(std::floor(ymax));
    int step = 1;
    while ((d1 - d0) / step > 8) ++step;
    for (int dec = d0; dec <= d1; dec += step) {
      const double p = py(dec);
      svg += "<line x1=\"64\" y1=\"" + fmt("%.2f", p) + "\" x2=\"70\" y2=\"" + fmt("%.2f", p) +
             "\" stroke=\"black\"/>\n";
      svg += "<text x=\"60\" y=\"" + fmt("%.2f", p + 4) +
             "\" font-size=\"12\" text-anchor=\"end\">1e" + std::to_string(dec) + "</text>\n";
    }
  } else {
    for (int i = 0; i < 5; ++i) {
      const double yv = ymin + (ymax - ymin) * i / 4.0;
      const double p = py(yv);
      svg += "<line x1=\"64\" y1=\"" + fmt("%.2f", p) + "\" x2=\"70\" y2=\"" + fmt("%.2f", p) +
             "\" stroke=\"black\"/>\n";
      svg += "<text x=\"60\" y=\"" + fmt("%.2f", p + 4) +
             "\" font-size=\"12\" text-anchor=\"end\">" + fmt("%.3g", yv) + "</text>\n";
    }
  }
  svg += "<text x=\"385\" y=\"474\" font-size=\"13\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  svg += "<text x=\"16\" y=\"225\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 225)\">" +
         y_label + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : std::nan("")) : s.y[i];
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      pts += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(y)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\"";
    if (s.dashed) svg += " stroke-dasharray=\"6 4\"";
    svg += " points=\"" + pts + "\"/>\n";
    if (!s.label.empty()) {
      const double ly = 30.0 + 16.0 * static_cast<double>(si);
      svg += "<rect x=\"590\" y=\"" + fmt("%.2f", ly - 9) + "\" width=\"10\" height=\"10\" fill=\"";
      svg += color;
      svg += "\"/>\n<text x=\"605\" y=\"" + fmt("%.2f", ly) + "\" font-size=\"12\">" + s.label +
             "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sscool::cli
