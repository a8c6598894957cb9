#pragma once
#include <functional>
#include <optional>
#include <vector>

namespace sscool::numkit {

struct LeastSquaresResult {
  std::vector<double> params;
  double residual_norm = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<bool> low_curvature;  // per-parameter near-zero-curvature diagnostic
};

using ModelFn = std::function<std::vector<double>(const std::vector<double>& params)>;
// Jacobian rows follow observations, columns follow params.
using JacobianFn =
    std::function<std::vector<std::vector<double>>(const std::vector<double>& params)>;

// Damped Gauss-Newton (Levenberg lambda on the normal equations). Finite-difference
// Jacobian when none is supplied. Converged when the gradient norm drops below 1e-10
// or the relative residual change below 1e-12; unresolvable singular normal equations
// yield converged=false rather than a throw.
LeastSquaresResult least_squares(const ModelFn& model, std::optional<JacobianFn> jacobian,
                                 std::vector<double> initial,
                                 const std::vector<double>& observations,
                                 std::size_t max_iter = 200);

}  // namespace sscool::numkit
