#pragma once
#include <vector>

namespace sscool::numkit {

// Abscissas are u = cos(theta) on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
  std::vector<double> weights;  // positive, sum to 2
};

QuadratureRule gauss_legendre(std::size_t n);

}  // namespace sscool::numkit
