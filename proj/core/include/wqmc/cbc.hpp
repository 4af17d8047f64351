#pragma once

#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/tensor_space.hpp"

namespace wqmc {

// Component-by-component construction of a polynomial lattice in the given
// weighted space: for each of the interlace_r * s internal dimensions the
// candidate q_j (nonzero polynomial of degree < m) minimizing the worst-case
// error of the interlaced rule on the coordinates built so far is kept; ties
// go to the smallest integer encoding.  The kernel must span at least s
// coordinates.
PolynomialLattice cbc_construct(int b, int m, int s, const ProductKernel& kernel,
                                int interlace_r = 1);

// Worst-case error restricted to the first `dims` coordinates of the kernel.
double wce_prefix(const QuadratureRule& rule, const ProductKernel& kernel, int dims);

}  // namespace wqmc
