#include <cmath>

#include "sscool/model/operators.hpp"
#include "sscool/numkit/linalg.hpp"

namespace sscool::model {

ComplexMatrix annihilation(const FockSpace& space) {
  const std::size_t n = space.cutoff;
  ComplexMatrix a(n, n);
  for (std::size_t k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexMatrix number_operator(const FockSpace& space) {
  const std::size_t n = space.cutoff;
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
  return m;
}

ComplexMatrix position(const FockSpace& space) {
  const std::size_t n = space.cutoff;
  ComplexMatrix x(n, n);
  for (std::size_t k = 1; k < n; ++k) {
    const double s = std::sqrt(static_cast<double>(k));
    x(k - 1, k) = s;
    x(k, k - 1) = s;
  }
  return x;
}

ComplexMatrix embed(const ComplexMatrix& internal_op, const ComplexMatrix& motional_op) {
  if (internal_op.rows != 2 || internal_op.cols != 2)
    throw contract_error("embed: internal factor must be 2x2");
  if (!motional_op.square()) throw contract_error("embed: motional factor must be square");
  const std::size_t n = motional_op.rows;
  ComplexMatrix out(2 * n, 2 * n);
  for (std::size_t si = 0; si < 2; ++si)
    for (std::size_t sj = 0; sj < 2; ++sj) {
      const cplx w = internal_op(si, sj);
      if (w == cplx(0.0)) continue;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(si * n + i, sj * n + j) = w * motional_op(i, j);
    }
  return out;
}

ComplexMatrix displacement(const FockSpace& space, double eta, double u) {
  if (std::abs(u) > 1.0) throw contract_error("displacement: |u| must be <= 1");
  ComplexMatrix arg = position(space);
  arg *= cplx(0.0, eta * u);
  return numkit::expm(arg);
}

ComplexMatrix ket_bra_ee() {
  ComplexMatrix m(2, 2);
  m(1, 1) = 1.0;
  return m;
}

ComplexMatrix ket_bra_ge() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix ket_bra_eg() {
  ComplexMatrix m(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace sscool::model
