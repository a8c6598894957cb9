#include "sscool/dynamics/evolve.hpp"

namespace sscool::dynamics {

using numkit::ComplexMatrix;
using numkit::cplx;
using numkit::matmul_reference;

// Straight-line Lindblad evaluation with the plain serial product. Exists to pin
// down the optimized kernels, not to be fast; makes no Hermiticity assumption.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const model::ModelTier& tier) {
  const ComplexMatrix& h = tier.hamiltonian;
  if (!rho.m.square() || rho.m.rows != h.rows)
    throw contract_error("lindblad_rhs: state dimension does not match the tier");

  ComplexMatrix out = matmul_reference(h, rho.m);
  out -= matmul_reference(rho.m, h);
  out *= cplx(0.0, -1.0);

  for (const auto& L : tier.jump_set.jumps) {
    const ComplexMatrix ld = L.adjoint();
    out += matmul_reference(matmul_reference(L, rho.m), ld);
    const ComplexMatrix k = matmul_reference(ld, L);
    ComplexMatrix half = matmul_reference(k, rho.m);
    half += matmul_reference(rho.m, k);
    half *= cplx(0.5, 0.0);
    out -= half;
  }

  DensityMatrix d;
  d.m = std::move(out);
  d.basis_tag = rho.basis_tag;
  return d;
}

}  // namespace sscool::dynamics
