#pragma once
#include <complex>
#include <cstddef>
#include <vector>

#include "sscool/errors.hpp"

namespace sscool::numkit {

using cplx = std::complex<double>;

// Dense row-major complex matrix. The only container used for operators and states.
struct ComplexMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> a;  // rows*cols entries, row-major

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool square() const { return rows == cols; }

  static ComplexMatrix zero(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }
  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows && i < cols; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : a) v *= s;
    return *this;
  }
  friend ComplexMatrix operator+(ComplexMatrix x, const ComplexMatrix& y) { return x += y; }
  friend ComplexMatrix operator-(ComplexMatrix x, const ComplexMatrix& y) { return x -= y; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix x) { return x *= s; }
};

double max_norm(const ComplexMatrix& m);            // max |entry|
double fro_norm(const ComplexMatrix& m);            // Frobenius
double one_norm(const ComplexMatrix& m);            // max column abs sum
double hermiticity_residual(const ComplexMatrix& m);  // max |m - m^dagger|

// Production product (OpenMP when available) and the plain triple loop kept as
// the cross-check reference for it.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul_reference(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace sscool::numkit
