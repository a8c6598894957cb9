#pragma once
#include <vector>

#include "sscool/numkit/complex_matrix.hpp"

namespace sscool::numkit {

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, orthonormal
};

// Cyclic Jacobi for Hermitian matrices. Input must be Hermitian within 1e-10.
EigResult hermitian_eig(const ComplexMatrix& m);

// Scaling-and-squaring with a truncated Taylor core on the scaled matrix.
ComplexMatrix expm(const ComplexMatrix& m);

namespace detail {

// PA = LU with partial pivoting; solves in place. Returns false when singular.
bool lu_solve(std::vector<double>& a, std::size_t n, std::vector<double>& rhs);
bool lu_solve_complex(std::vector<cplx>& a, std::size_t n, std::vector<cplx>& rhs);

}  // namespace detail

}  // namespace sscool::numkit
