#pragma once
#include <string>
#include <vector>

namespace sscool::cli {

struct Series {
  std::vector<double> x, y;
  std::string label;
  bool dashed = false;
};

// Undecorated polyline plot with axis ticks. log_y plots log10(y) and drops
// nonpositive or nonfinite points.
std::string svg_plot(const std::vector<Series>& series, bool log_y, const std::string& x_label,
                     const std::string& y_label);

}  // namespace sscool::cli
