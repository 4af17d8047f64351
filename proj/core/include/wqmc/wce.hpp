#pragma once

#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/tensor_space.hpp"

namespace wqmc {

// Exact worst-case error of the rule in the kernel's space:
// e^2 = integral integral K - 2 sum_i w_i int K(t_i, .) + sum_ij w_i w_j K(t_i, t_j).
// Nonnegative; tiny negative round-off (>= -1e-10) is clamped, anything lower
// throws.  Cost O(n^2 s).
double wce(const QuadratureRule& rule, const ProductKernel& kernel);

}  // namespace wqmc
