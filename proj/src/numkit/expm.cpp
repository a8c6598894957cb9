#include <cmath>

#include "sscool/numkit/linalg.hpp"

namespace sscool::numkit {

// Scaling and squaring: bring ||A/2^s||_1 below 1/2, run the Taylor series to
// machine-precision tail, square s times. Accurate to ~1e-13 relative for
// ||A|| <= 50 (the squaring chain stays short).
ComplexMatrix expm(const ComplexMatrix& m) {
  if (!m.square()) throw contract_error("expm: matrix not square");
  for (const auto& z : m.a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw contract_error("expm: non-finite entry");

  const std::size_t n = m.rows;
  const double norm = one_norm(m);
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));

  ComplexMatrix B = m;
  const double scale = std::ldexp(1.0, -s);
  B *= scale;

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = matmul(term, B);
    term *= cplx(1.0 / k);
    result += term;
    if (max_norm(term) < 1e-18 * std::max(1.0, max_norm(result))) break;
  }
  for (int k = 0; k < s; ++k) result = matmul(result, result);
  return result;
}

}  // namespace sscool::numkit
