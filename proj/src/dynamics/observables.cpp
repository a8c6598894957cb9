#include <cmath>

#include "sscool/analytics/closed_forms.hpp"
#include "sscool/dynamics/evolve.hpp"
#include "sscool/numkit/linalg.hpp"

namespace sscool::dynamics {

namespace {
std::size_t motional_dim(const DensityMatrix& rho) {
  if (!rho.m.square() || rho.m.rows % 2 != 0 || rho.m.rows < 4)
    throw contract_error("observable: state must be square with even dimension >= 4");
  return rho.m.rows / 2;
}
}  // namespace

double mean_phonon(const DensityMatrix& rho) {
  const std::size_t n = motional_dim(rho);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    s += static_cast<double>(k) * (rho.m(k, k).real() + rho.m(n + k, n + k).real());
  return s;
}

double excited_population(const DensityMatrix& rho) {
  const std::size_t n = motional_dim(rho);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += rho.m(n + k, n + k).real();
  return s;
}

std::vector<double> dressed_subspace_populations(const DensityMatrix& rho,
                                                 const model::IonParams& p) {
  const std::size_t n = motional_dim(rho);
  const auto b = analytics::dressed_basis(p.delta, p.omega);
  // <x,k|rho|x,k> for the real internal vectors x = +/-.
  auto diag = [&](const std::array<double, 2>& v, std::size_t k) {
    double s = 0.0;
    for (std::size_t si = 0; si < 2; ++si)
      for (std::size_t sj = 0; sj < 2; ++sj)
        s += v[si] * v[sj] * rho.m(si * n + k, sj * n + k).real();
    return s;
  };
  // Manifold m couples |+, m-1> with |-, m>; the topmost |+, n-1> stands alone.
  std::vector<double> pops(n + 1, 0.0);
  pops[0] = diag(b.minus_vec, 0);
  for (std::size_t m = 1; m < n; ++m) pops[m] = diag(b.plus_vec, m - 1) + diag(b.minus_vec, m);
  pops[n] = diag(b.plus_vec, n - 1);
  return pops;
}

double min_eigenvalue(const DensityMatrix& rho) {
  if (!rho.m.square()) throw contract_error("min_eigenvalue: state must be square");
  // Symmetrize first so integrator round-off cannot trip the eig hermiticity gate.
  numkit::ComplexMatrix h = rho.m;
  for (std::size_t i = 0; i < h.rows; ++i)
    for (std::size_t j = i; j < h.cols; ++j) {
      const numkit::cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  return numkit::hermitian_eig(h).eigenvalues.front();
}

}  // namespace sscool::dynamics
