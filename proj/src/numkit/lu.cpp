#include <cmath>
#include <vector>

#include "sscool/numkit/linalg.hpp"

namespace sscool::numkit::detail {

namespace {

template <class T>
bool lu_solve_impl(std::vector<T>& a, std::size_t n, std::vector<T>& rhs) {
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::abs(a[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) return false;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[k * n + j]);
      std::swap(rhs[p], rhs[k]);
    }
    const T pivot = a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a[i * n + k] / pivot;
      if (f == T(0.0)) continue;
      a[i * n + k] = f;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      rhs[i] -= f * rhs[k];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    T s = rhs[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a[ii * n + j] * rhs[j];
    rhs[ii] = s / a[ii * n + ii];
  }
  return true;
}

}  // namespace

bool lu_solve(std::vector<double>& a, std::size_t n, std::vector<double>& rhs) {
  return lu_solve_impl(a, n, rhs);
}

bool lu_solve_complex(std::vector<cplx>& a, std::size_t n, std::vector<cplx>& rhs) {
  return lu_solve_impl(a, n, rhs);
}

}  // namespace sscool::numkit::detail
