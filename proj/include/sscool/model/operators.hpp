#pragma once
#include "sscool/model/params.hpp"
#include "sscool/numkit/complex_matrix.hpp"

namespace sscool::model {

using numkit::ComplexMatrix;
using numkit::cplx;

// Internal basis ordering everywhere: index 0 = |g>, index 1 = |e>.
// Product-space index = internal * cutoff + phonon number.

ComplexMatrix annihilation(const FockSpace& space);          // <n-1|a|n> = sqrt(n)
ComplexMatrix number_operator(const FockSpace& space);       // diag(0..N-1)
ComplexMatrix position(const FockSpace& space);              // a + a^dagger

// Kronecker product, internal factor first.
ComplexMatrix embed(const ComplexMatrix& internal_op, const ComplexMatrix& motional_op);

// expm(i*eta*u*(a+a^dagger)); unitary up to truncation leakage in the top levels.
ComplexMatrix displacement(const FockSpace& space, double eta, double u);

// 2x2 internal building blocks in the (g,e) ordering.
ComplexMatrix ket_bra_ee();
ComplexMatrix ket_bra_ge();  // |g><e|
ComplexMatrix ket_bra_eg();  // |e><g|

}  // namespace sscool::model
