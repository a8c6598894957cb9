#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "sscool/analytics/closed_forms.hpp"
#include "sscool/dynamics/evolve.hpp"
#include "sscool/model/operators.hpp"
#include "sscool/model/tiers.hpp"

using namespace sscool;
using namespace sscool::model;

namespace {

double max_abs(const ComplexMatrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) d = std::max(d, std::abs(m(i, j)));
  return d;
}

double herm_residual(const ComplexMatrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

}  // namespace

TEST_CASE("displacement is unitary with the exact vacuum matrix element") {
  const FockSpace space(40);
  const auto d = displacement(space, 0.1, 1.0);
  // <0|exp(i eta u (a+a^dag))|0> = exp(-(eta u)^2 / 2)
  CHECK(std::abs(d(0, 0) - std::exp(-0.005)) < 1e-12);
  const auto prod = numkit::matmul(d, d.adjoint());
  ComplexMatrix eye(40, 40);
  for (std::size_t i = 0; i < 40; ++i) eye(i, i) = 1.0;
  ComplexMatrix diff = prod;
  diff -= eye;
  CHECK(max_abs(diff) < 1e-12);

  // reversing the direction conjugates the kernel
  const auto dm = displacement(space, 0.1, -1.0);
  ComplexMatrix adj_diff = dm;
  adj_diff -= d.adjoint();
  CHECK(max_abs(adj_diff) < 1e-13);
}

TEST_CASE("full-coupling Hamiltonian: hermitian, sideband element, small-eta limit") {
  IonParams p;
  const FockSpace space(12);
  const auto h = hamiltonian_exact(p, space);
  CHECK(herm_residual(h) < 1e-15);

  // coupling block is (Omega/2) D(-eta) between e-row and g-column
  const auto d = displacement(space, -p.eta, 1.0);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(std::abs(h(12 + 0, k) - 0.5 * p.omega * d(0, k)) < 1e-14);

  // diagonal: nu*k on the ground block, nu*k - delta on the excited block
  IonParams pd = p;
  pd.delta = -0.7;
  const auto hd = hamiltonian_exact(pd, space);
  CHECK(std::abs(hd(3, 3) - 3.0 * pd.nu) < 1e-14);
  CHECK(std::abs(hd(12 + 3, 12 + 3) - (3.0 * pd.nu + 0.7)) < 1e-14);

  // first order in eta the full coupling collapses onto the linear model
  IonParams ps = p;
  ps.eta = 0.02;
  ComplexMatrix gap = hamiltonian_exact(ps, space);
  gap -= hamiltonian_ld(ps, space);
  CHECK(max_abs(gap) < ps.omega * ps.eta * ps.eta * 12.0);
}

TEST_CASE("linear-coupling Hamiltonian carries the first sideband element") {
  IonParams p;
  const FockSpace space(10);
  const auto h = hamiltonian_ld(p, space);
  CHECK(herm_residual(h) < 1e-15);
  // <e,0|H|g,1> = -i eta Omega / 2
  CHECK(std::abs(h(10 + 0, 1) - cplx(0.0, -0.5 * p.eta * p.omega)) < 1e-15);
  // carrier element <e,k|H|g,k> = Omega/2
  CHECK(std::abs(h(10 + 4, 4) - cplx(0.5 * p.omega, 0.0)) < 1e-15);
}

TEST_CASE("resonant dressed Hamiltonian couples only adjacent manifolds") {
  IonParams p;
  p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
  const FockSpace space(10);
  const std::size_t n = 10;
  const auto h = hamiltonian_rwa(p, space);
  CHECK(herm_residual(h) < 1e-15);

  const auto b = analytics::dressed_basis(p.delta, p.omega);
  auto bra_ket = [&](const std::array<double, 2>& u, std::size_t ku, const std::array<double, 2>& v,
                     std::size_t kv) {
    cplx s = 0.0;
    for (std::size_t si = 0; si < 2; ++si)
      for (std::size_t sj = 0; sj < 2; ++sj) s += u[si] * v[sj] * h(si * n + ku, sj * n + kv);
    return s;
  };
  // <+, k-1| H |-, k> = i (eta Omega / 2) sqrt(k)
  for (std::size_t k = 1; k <= 4; ++k) {
    const cplx expect(0.0, 0.5 * p.eta * p.omega * std::sqrt(double(k)));
    CHECK(std::abs(bra_ket(b.plus_vec, k - 1, b.minus_vec, k) - expect) < 1e-13);
  }
  // no diagonal terms, no distant-manifold coupling
  CHECK(std::abs(bra_ket(b.plus_vec, 2, b.plus_vec, 2)) < 1e-13);
  CHECK(std::abs(bra_ket(b.minus_vec, 2, b.minus_vec, 2)) < 1e-13);
  CHECK(std::abs(bra_ket(b.plus_vec, 0, b.minus_vec, 3)) < 1e-13);
}

TEST_CASE("angular jump family resolves the full decay rate and emission moments") {
  IonParams p;
  const FockSpace space(20);
  const auto js = dissipator_exact(p, space);
  REQUIRE(js.structure == JumpStructure::AngularFamily);
  REQUIRE(js.jumps.size() == 32);
  REQUIRE(js.angular.rates.size() == 32);

  double sum = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < 32; ++j) {
    sum += js.angular.rates[j];
    m2 += js.angular.rates[j] * js.angular.nodes[j] * js.angular.nodes[j];
  }
  CHECK(sum == doctest::Approx(p.gamma).epsilon(1e-14));
  CHECK(m2 / p.gamma == doctest::Approx(0.4).epsilon(1e-13));  // dipole second moment

  IonParams iso = p;
  iso.dipole = EmissionPattern::Isotropic;
  const auto jsi = dissipator_exact(iso, space);
  double m2i = 0.0, sumi = 0.0;
  for (std::size_t j = 0; j < 32; ++j) {
    sumi += jsi.angular.rates[j];
    m2i += jsi.angular.rates[j] * jsi.angular.nodes[j] * jsi.angular.nodes[j];
  }
  CHECK(sumi == doctest::Approx(p.gamma).epsilon(1e-14));
  CHECK(m2i / p.gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  // completeness: sum L^dag L = gamma |e><e| (x) I, exact because each kick is unitary
  ComplexMatrix k(40, 40);
  for (const auto& l : js.jumps) {
    auto ll = numkit::matmul(l.adjoint(), l);
    k += ll;
  }
  ComplexMatrix target = embed(ket_bra_ee(), [] {
    ComplexMatrix eye(20, 20);
    for (std::size_t i = 0; i < 20; ++i) eye(i, i) = 1.0;
    return eye;
  }());
  target *= cplx(p.gamma, 0.0);
  k -= target;
  CHECK(max_abs(k) < 1e-12);

  CHECK_THROWS_AS(dissipator_exact(p, space, 4), contract_error);
}

TEST_CASE("recoil-free dissipator is the bare lowering channel") {
  IonParams p;
  const FockSpace space(8);
  const auto js = dissipator_ld0(p, space);
  REQUIRE(js.structure == JumpStructure::InternalStatic);
  REQUIRE(js.jumps.size() == 1);
  REQUIRE(js.internal_ops.size() == 1);
  CHECK(std::abs(js.jumps[0](0, 8) - std::sqrt(p.gamma)) < 1e-15);
  CHECK(std::abs(js.jumps[0](0, 0)) == 0.0);
}

TEST_CASE("dressed dissipator acts as the two-level rate matrix on populations") {
  IonParams p;
  p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
  const FockSpace space(6);
  const std::size_t n = 6;
  const auto r = analytics::dressed_rates(p);
  auto js = dissipator_dressed(p, space);
  REQUIRE(js.structure == JumpStructure::InternalStatic);
  REQUIRE(js.jumps.size() == 3);

  ModelTier tier;
  tier.tag = TierTag::RwaDressed;
  tier.hamiltonian = ComplexMatrix(2 * n, 2 * n);
  tier.jump_set = js;
  tier.params = p;
  tier.cutoff = n;

  const auto b = analytics::dressed_basis(p.delta, p.omega);
  auto dressed_ket = [&](const std::array<double, 2>& v, std::size_t k) {
    std::vector<cplx> out(2 * n, 0.0);
    out[0 * n + k] = v[0];
    out[1 * n + k] = v[1];
    return out;
  };
  auto add_proj = [&](ComplexMatrix& rho, const std::vector<cplx>& v, double wgt) {
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) rho(i, j) += wgt * v[i] * std::conj(v[j]);
  };
  dynamics::DensityMatrix rho;
  rho.m = ComplexMatrix(2 * n, 2 * n);
  const auto plus0 = dressed_ket(b.plus_vec, 0);
  const auto minus2 = dressed_ket(b.minus_vec, 2);
  add_proj(rho.m, plus0, 0.3);
  add_proj(rho.m, minus2, 0.7);

  const auto rhs = dynamics::lindblad_rhs(rho, tier);
  auto expect_pop = [&](const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) s += std::conj(v[i]) * rhs.m(i, j) * v[j];
    return s.real();
  };
  // populations obey dp(+)/dt = -gm p(+) + gp p(-), dp(-)/dt = +gm p(+) - gp p(-)
  CHECK(expect_pop(plus0) == doctest::Approx(-r.gamma_minus * 0.3).epsilon(1e-12));
  CHECK(expect_pop(dressed_ket(b.minus_vec, 0)) ==
        doctest::Approx(r.gamma_minus * 0.3).epsilon(1e-12));
  CHECK(expect_pop(minus2) == doctest::Approx(-r.gamma_plus * 0.7).epsilon(1e-12));
  CHECK(expect_pop(dressed_ket(b.plus_vec, 2)) ==
        doctest::Approx(r.gamma_plus * 0.7).epsilon(1e-12));
  // motional index untouched by every channel
  CHECK(expect_pop(dressed_ket(b.plus_vec, 1)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("thermal initial state: normalization, geometric ratios, truncation gate") {
  IonParams p;  // n0 = 10
  const FockSpace space(70);
  double tail = -1.0;
  const auto rho = thermal_initial_state(p, space, &tail);
  const double q = p.n0 / (1.0 + p.n0);
  CHECK(tail == doctest::Approx(std::pow(q, 70.0)).epsilon(1e-12));

  double trace = 0.0;
  for (std::size_t i = 0; i < 140; ++i) trace += rho.m(i, i).real();
  CHECK(trace == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k + 1 < 10; ++k)
    CHECK(rho.m(k + 1, k + 1).real() / rho.m(k, k).real() == doctest::Approx(q).epsilon(1e-12));
  // no excited-state occupation anywhere
  for (std::size_t k = 0; k < 70; ++k) CHECK(rho.m(70 + k, 70 + k).real() == 0.0);
  // truncated thermal mean (independently computed for n0=10, cutoff 70)
  CHECK(dynamics::mean_phonon(rho) == doctest::Approx(9.9112582).epsilon(1e-6));

  CHECK_THROWS_AS(thermal_initial_state(p, FockSpace(20)), contract_error);
}

TEST_CASE("tier assembly wires tags, structures, and parameters") {
  IonParams p;
  p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
  const FockSpace space(9);

  const auto ex = build_tier(p, space, TierTag::Exact);
  CHECK(ex.tag == TierTag::Exact);
  CHECK(ex.jump_set.structure == JumpStructure::AngularFamily);
  CHECK(ex.cutoff == 9);
  CHECK(ex.params.omega == p.omega);

  const auto ld = build_tier(p, space, TierTag::LambDicke);
  CHECK(ld.tag == TierTag::LambDicke);
  CHECK(ld.jump_set.structure == JumpStructure::InternalStatic);
  CHECK(ld.jump_set.jumps.size() == 1);

  const auto rwa = build_tier(p, space, TierTag::RwaDressed);
  CHECK(rwa.tag == TierTag::RwaDressed);
  CHECK(rwa.jump_set.jumps.size() == 3);
  CHECK(herm_residual(rwa.hamiltonian) < 1e-15);
}
