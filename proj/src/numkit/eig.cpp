#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sscool/numkit/linalg.hpp"

namespace sscool::numkit {

// Cyclic Jacobi with complex rotations. Each pivot (p,q) is annihilated by the
// unitary W: W_pp = c, W_qp = s e^{-ia}, W_pq = -s e^{ia}, W_qq = c, where
// a = arg(A_pq) and theta = atan2(2|A_pq|, A_pp - A_qq)/2.
EigResult hermitian_eig(const ComplexMatrix& m) {
  if (!m.square()) throw contract_error("hermitian_eig: matrix not square");
  if (hermiticity_residual(m) > 1e-10)
    throw contract_error("hermitian_eig: input not Hermitian within 1e-10");

  const std::size_t n = m.rows;
  ComplexMatrix A = m;
  // Clean the Hermitian structure so diagonals are exactly real.
  for (std::size_t i = 0; i < n; ++i) {
    A(i, i) = cplx(A(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx v = 0.5 * (A(i, j) + std::conj(A(j, i)));
      A(i, j) = v;
      A(j, i) = std::conj(v);
    }
  }
  ComplexMatrix V = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(A(p, q));
    return std::sqrt(2.0 * s);
  };

  const double stop = 1e-14 * std::max(1.0, fro_norm(A));
  const std::size_t max_sweeps = 60;
  std::size_t sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double h = std::abs(A(p, q));
        if (h < 1e-300) continue;
        const double alpha = std::arg(A(p, q));
        const double theta = 0.5 * std::atan2(2.0 * h, A(p, p).real() - A(q, q).real());
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx eia = std::polar(1.0, alpha);
        const cplx semi = s * std::conj(eia);  // s e^{-ia}
        const cplx sepl = s * eia;             // s e^{+ia}
        // A <- W^dag A W: columns first, then rows.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = A(k, p), akq = A(k, q);
          A(k, p) = akp * c + akq * semi;
          A(k, q) = -akp * sepl + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk + sepl * aqk;
          A(q, k) = -semi * apk + c * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = cplx(A(p, p).real(), 0.0);
        A(q, q) = cplx(A(q, q).real(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = V(k, p), vkq = V(k, q);
          V(k, p) = vkp * c + vkq * semi;
          V(k, q) = -vkp * sepl + vkq * c;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > stop)
    throw diagnostic_error("hermitian_eig: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return A(i, i).real() < A(j, j).real(); });

  EigResult r;
  r.eigenvalues.resize(n);
  r.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    r.eigenvalues[j] = A(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) r.eigenvectors(i, j) = V(i, order[j]);
  }
  return r;
}

}  // namespace sscool::numkit
