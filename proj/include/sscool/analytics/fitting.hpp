#pragma once
#include <vector>

namespace sscool::analytics {

struct CoolingFit {
  double w_fit = 0.0;
  double nbar_st_fit = 0.0;
  double amplitude = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  bool low_identifiability = false;
};

// Three-parameter fit nbar(t) = A exp(-W t) + nbar_st over samples with
// t >= window_start (default discards the pre-exponential transient).
// The fit is refined with relative (1/|nbar|) weighting so the plateau is
// resolved even when the decay spans several decades; residual_norm reports
// the weighted misfit.
CoolingFit fit_cooling_curve(const std::vector<double>& times, const std::vector<double>& nbar,
                             double window_start = 20.0);

}  // namespace sscool::analytics
