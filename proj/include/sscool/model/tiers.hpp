#pragma once
#include <vector>

#include "sscool/dynamics/density_matrix.hpp"
#include "sscool/model/operators.hpp"

namespace sscool::model {

// Structure hints consumed by the optimized right-hand side; the Generic path
// only ever touches `jumps`.
enum class JumpStructure { Generic, AngularFamily, InternalStatic };

struct AngularFamilyData {
  double eta = 0.0;
  std::vector<double> nodes;  // emission directions u_j = cos(theta_j)
  std::vector<double> rates;  // absorbed rate of jump j: w_j * gamma * N(u_j)
};

struct JumpSet {
  std::vector<ComplexMatrix> jumps;  // full-space operators, prefactors absorbed
  JumpStructure structure = JumpStructure::Generic;
  AngularFamilyData angular;                // when AngularFamily
  std::vector<ComplexMatrix> internal_ops;  // 2x2 ops (⊗ I), when InternalStatic
};

enum class TierTag { Exact, LambDicke, RwaDressed };

struct ModelTier {
  TierTag tag = TierTag::Exact;
  ComplexMatrix hamiltonian;
  JumpSet jump_set;
  IonParams params;
  std::size_t cutoff = 0;
};

// -Delta|e><e| + nu a^dag a + (Omega/2)(|e><g| D(-eta) + |g><e| D(eta))
ComplexMatrix hamiltonian_exact(const IonParams& p, const FockSpace& space);
// First order in eta: carrier coupling plus eta(Omega/2)(-i|e><g| + i|g><e|)(a + a^dag)
ComplexMatrix hamiltonian_ld(const IonParams& p, const FockSpace& space);
// Red-sideband resonant coupling in the dressed internal basis, expressed in the
// bare basis: (eta Omega/2)(i|+><-| a - i|-><+| a^dag)
ComplexMatrix hamiltonian_rwa(const IonParams& p, const FockSpace& space);

// One jump per quadrature node: sqrt(w_j gamma N(u_j)) |g><e| exp(i eta u_j (a+a^dag)),
// N(u) = (3/8)(1+u^2) for dipole emission, 1/2 for isotropic.
JumpSet dissipator_exact(const IonParams& p, const FockSpace& space, std::size_t quad_points = 32);
// Zeroth order in eta: the single jump sqrt(gamma) |g><e|.
JumpSet dissipator_ld0(const IonParams& p, const FockSpace& space);
// Three dressed channels sqrt(gamma_-)|-><+|, sqrt(gamma_+)|+><-|,
// sqrt(gamma_phi)(|+><+| - |-><-|), each ⊗ I.
JumpSet dissipator_dressed(const IonParams& p, const FockSpace& space);

// |g><g| ⊗ thermal(n0), renormalized on the truncated space. The discarded tail
// mass is written to *tail_mass when given; above 2e-3 the truncation is refused.
dynamics::DensityMatrix thermal_initial_state(const IonParams& p, const FockSpace& space,
                                              double* tail_mass = nullptr);

ModelTier build_tier(const IonParams& p, const FockSpace& space, TierTag tag,
                     std::size_t quad_points = 32);

}  // namespace sscool::model
