#include <cmath>

#include "sscool/numkit/complex_matrix.hpp"

namespace sscool::numkit {

double max_norm(const ComplexMatrix& m) {
  double v = 0.0;
  for (const auto& z : m.a) v = std::max(v, std::abs(z));
  return v;
}

double fro_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.a) s += std::norm(z);
  return std::sqrt(s);
}

double one_norm(const ComplexMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double hermiticity_residual(const ComplexMatrix& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      v = std::max(v, std::abs(m(i, j) - std::conj(m(j, i))));
  return v;
}

ComplexMatrix matmul_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw contract_error("matmul: inner dimensions differ");
  ComplexMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw contract_error("matmul: inner dimensions differ");
  ComplexMatrix c(a.rows, b.cols);
  const std::size_t n = a.rows, m = b.cols, kk = a.cols;
  // i-k-j ordering keeps both B and C rows contiguous; per-row accumulation is
  // deterministic regardless of thread count.
#pragma omp parallel for schedule(static) if (n * m * kk > 64 * 64 * 64)
  for (std::size_t i = 0; i < n; ++i) {
    cplx* ci = &c.a[i * m];
    for (std::size_t k = 0; k < kk; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      const cplx* bk = &b.a[k * m];
      for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

}  // namespace sscool::numkit
