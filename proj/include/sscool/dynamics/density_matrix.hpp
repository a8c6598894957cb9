#pragma once
#include "sscool/numkit/complex_matrix.hpp"

namespace sscool::dynamics {

enum class BasisTag { Bare, Dressed };

// State on the product space. Hermitian within 1e-8, unit trace within 1e-8,
// min eigenvalue >= -1e-7 — audited at sample points, never enforced per step.
struct DensityMatrix {
  numkit::ComplexMatrix m;
  BasisTag basis_tag = BasisTag::Bare;
};

}  // namespace sscool::dynamics
