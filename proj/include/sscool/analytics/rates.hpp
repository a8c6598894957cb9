#pragma once
#include <vector>

#include "sscool/model/params.hpp"

namespace sscool::analytics {

enum class RateVariant { Full, Scaled, DiagonalDressed };

// Classical generator over dressed-subspace populations, column-stochastic
// (columns sum to zero, off-diagonal entries >= 0). Full/Scaled act on the
// summed populations p_n, n = 0..truncation; DiagonalDressed acts on the
// interleaved vector [p_0, p_{1,+}, p_{1,-}, p_{2,+}, p_{2,-}, ...].
struct RateModel {
  std::vector<double> generator;  // row-major, dim x dim
  std::size_t dim = 0;
  RateVariant variant = RateVariant::Full;
  std::size_t truncation = 0;

  double at(std::size_t i, std::size_t j) const { return generator[i * dim + j]; }
};

struct RateTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> populations;  // one vector per time
  std::vector<double> nbar;  // sum_n p_n (n - 1/2) for n >= 1 (manifold mean)
};

RateModel rate_model(const model::IonParams& p, std::size_t truncation, RateVariant variant);

// Nullspace of the generator, normalized to sum 1.
std::vector<double> rate_steady_state(const RateModel& m);

RateTrajectory rate_evolve(const RateModel& m, std::vector<double> p0, double t_final,
                           std::size_t samples);

// Thermal initial populations over manifolds 0..truncation, normalized.
std::vector<double> thermal_populations(double n0, std::size_t truncation);

}  // namespace sscool::analytics
