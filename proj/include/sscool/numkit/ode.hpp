#pragma once
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace sscool::numkit {

struct OdeSolution {
  std::vector<double> times;                 // sample times actually emitted
  std::vector<std::vector<double>> states;   // dense-output states at those times
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  double tolerance = 0.0;
};

using RhsFn = std::function<void(double t, const double* y, double* dydt)>;

struct OdeOptions {
  double initial_step = 0.0;  // 0: automatic
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
  // When set, called at every sample time with a mutable dense-output copy and
  // states are not retained in the solution (keeps long trajectories in O(1) memory).
  std::function<void(std::size_t sample_idx, double t, std::vector<double>& y)> observer;
};

// Dormand-Prince 5(4) embedded pair, PI step-size control, quartic dense output.
OdeSolution integrate_adaptive(const RhsFn& rhs, std::vector<double> y0,
                               std::pair<double, double> t_span, double rel_tol,
                               double abs_tol, const std::vector<double>& sample_times,
                               const OdeOptions& opts = {});

}  // namespace sscool::numkit
