#include <cmath>
#include <string>

#include "sscool/analytics/closed_forms.hpp"
#include "sscool/model/tiers.hpp"
#include "sscool/numkit/quadrature.hpp"

namespace sscool::model {

using analytics::dressed_basis;
using analytics::dressed_rates;

ComplexMatrix hamiltonian_exact(const IonParams& p, const FockSpace& space) {
  p.validate();
  const std::size_t n = space.cutoff;
  ComplexMatrix h(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    h(k, k) = p.nu * static_cast<double>(k);                  // |g,k>
    h(n + k, n + k) = p.nu * static_cast<double>(k) - p.delta;  // |e,k>
  }
  // Running-wave coupling (Omega/2)(|e><g| D(-eta) + |g><e| D(eta)).
  ComplexMatrix dm = displacement(space, -p.eta, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = 0.5 * p.omega * dm(i, j);
      h(n + i, j) = v;
      h(j, n + i) = std::conj(v);
    }
  return h;
}

ComplexMatrix hamiltonian_ld(const IonParams& p, const FockSpace& space) {
  p.validate();
  const std::size_t n = space.cutoff;
  ComplexMatrix h(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    h(k, k) = p.nu * static_cast<double>(k);
    h(n + k, n + k) = p.nu * static_cast<double>(k) - p.delta;
  }
  // Carrier (Omega/2) sigma_x plus first sideband order
  // eta(Omega/2)(-i|e><g| + i|g><e|)(a + a^dag).
  for (std::size_t i = 0; i < n; ++i) {
    h(n + i, i) += 0.5 * p.omega;
    h(i, n + i) += 0.5 * p.omega;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double x = std::sqrt(static_cast<double>(k));
    const cplx v = cplx(0.0, -0.5 * p.eta * p.omega) * x;  // <e,i|H1|g,j>
    h(n + k - 1, k) += v;
    h(n + k, k - 1) += v;
    h(k, n + k - 1) += std::conj(v);
    h(k - 1, n + k) += std::conj(v);
  }
  return h;
}

ComplexMatrix hamiltonian_rwa(const IonParams& p, const FockSpace& space) {
  p.validate();
  const auto basis = dressed_basis(p.delta, p.omega);
  const std::size_t n = space.cutoff;
  // |+><-| in the bare (g,e) basis.
  ComplexMatrix pm(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) pm(i, j) = basis.plus_vec[i] * basis.minus_vec[j];
  ComplexMatrix h(2 * n, 2 * n);
  const cplx g = cplx(0.0, 0.5 * p.eta * p.omega);  // i eta Omega / 2
  for (std::size_t k = 1; k < n; ++k) {
    const double x = std::sqrt(static_cast<double>(k));
    // i|+><-| a  contributes at motional (k-1, k); the conjugate block closes Hermiticity.
    for (std::size_t si = 0; si < 2; ++si)
      for (std::size_t sj = 0; sj < 2; ++sj) {
        const cplx v = g * pm(si, sj) * x;
        h(si * n + k - 1, sj * n + k) += v;
        h(sj * n + k, si * n + k - 1) += std::conj(v);
      }
  }
  return h;
}

JumpSet dissipator_exact(const IonParams& p, const FockSpace& space, std::size_t quad_points) {
  p.validate();
  if (quad_points < 8) throw contract_error("dissipator_exact: need quad_points >= 8");
  const auto rule = numkit::gauss_legendre(quad_points);
  JumpSet js;
  js.structure = JumpStructure::AngularFamily;
  js.angular.eta = p.eta;
  const ComplexMatrix ge = ket_bra_ge();
  for (std::size_t j = 0; j < quad_points; ++j) {
    const double u = rule.nodes[j];
    const double pattern = (p.dipole == EmissionPattern::Dipole) ? 0.375 * (1.0 + u * u) : 0.5;
    const double rate = rule.weights[j] * p.gamma * pattern;
    ComplexMatrix d = displacement(space, p.eta, u);
    ComplexMatrix L = embed(ge, d);
    L *= std::sqrt(rate);
    js.jumps.push_back(std::move(L));
    js.angular.nodes.push_back(u);
    js.angular.rates.push_back(rate);
  }
  return js;
}

JumpSet dissipator_ld0(const IonParams& p, const FockSpace& space) {
  p.validate();
  JumpSet js;
  js.structure = JumpStructure::InternalStatic;
  ComplexMatrix op = ket_bra_ge();
  op *= std::sqrt(p.gamma);
  js.jumps.push_back(embed(op, ComplexMatrix::identity(space.cutoff)));
  js.internal_ops.push_back(std::move(op));
  return js;
}

JumpSet dissipator_dressed(const IonParams& p, const FockSpace& space) {
  p.validate();
  const auto basis = dressed_basis(p.delta, p.omega);
  const auto rates = dressed_rates(p);
  // Eq-style (gamma/2) D_X with D_X(rho) = 2 X rho X^dag - {X^dag X, rho} equals the
  // standard dissipator of the single operator sqrt(gamma) X; rates absorbed here.
  ComplexMatrix mp(2, 2), pm(2, 2), phi(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      mp(i, j) = basis.minus_vec[i] * basis.plus_vec[j];   // |-><+|
      pm(i, j) = basis.plus_vec[i] * basis.minus_vec[j];   // |+><-|
      phi(i, j) = basis.plus_vec[i] * basis.plus_vec[j] - basis.minus_vec[i] * basis.minus_vec[j];
    }
  mp *= std::sqrt(rates.gamma_minus);
  pm *= std::sqrt(rates.gamma_plus);
  phi *= std::sqrt(rates.gamma_phi);

  JumpSet js;
  js.structure = JumpStructure::InternalStatic;
  const ComplexMatrix eye = ComplexMatrix::identity(space.cutoff);
  for (ComplexMatrix* op : {&mp, &pm, &phi}) {
    js.jumps.push_back(embed(*op, eye));
    js.internal_ops.push_back(*op);
  }
  return js;
}

dynamics::DensityMatrix thermal_initial_state(const IonParams& p, const FockSpace& space,
                                              double* tail_mass) {
  p.validate();
  const std::size_t n = space.cutoff;
  const double q = p.n0 / (1.0 + p.n0);
  // Geometric tail beyond the cutoff: q^N.
  const double tail = std::pow(q, static_cast<double>(n));
  if (tail_mass) *tail_mass = tail;
  if (tail >= 2e-3)
    throw contract_error("thermal_initial_state: truncation tail mass " + std::to_string(tail) +
                         " >= 2e-3; increase the cutoff");
  dynamics::DensityMatrix rho;
  rho.m = ComplexMatrix(2 * n, 2 * n);
  const double norm = 1.0 - tail;  // sum of the first N geometric weights
  double w = (1.0 / (1.0 + p.n0)) / norm;
  for (std::size_t k = 0; k < n; ++k) {
    rho.m(k, k) = w;  // |g,k>
    w *= q;
  }
  return rho;
}

ModelTier build_tier(const IonParams& p, const FockSpace& space, TierTag tag,
                     std::size_t quad_points) {
  ModelTier tier;
  tier.tag = tag;
  tier.params = p;
  tier.cutoff = space.cutoff;
  switch (tag) {
    case TierTag::Exact:
      tier.hamiltonian = hamiltonian_exact(p, space);
      tier.jump_set = dissipator_exact(p, space, quad_points);
      break;
    case TierTag::LambDicke:
      tier.hamiltonian = hamiltonian_ld(p, space);
      tier.jump_set = dissipator_ld0(p, space);
      break;
    case TierTag::RwaDressed:
      tier.hamiltonian = hamiltonian_rwa(p, space);
      tier.jump_set = dissipator_dressed(p, space);
      break;
  }
  return tier;
}

}  // namespace sscool::model
