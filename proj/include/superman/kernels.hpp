#pragma once

#include "superman/tensor.hpp"

namespace superman::kernels {

// C = op(A) * op(B) where op transposes when the flag is set. Both variants
// compute each output element as the same left-to-right dot product, so the
// parallel kernel is bit-identical to the serial reference.
Tensor matmul_serial(const Tensor& a, const Tensor& b, bool trans_a = false,
                     bool trans_b = false);
Tensor matmul_parallel(const Tensor& a, const Tensor& b, bool trans_a = false,
                       bool trans_b = false);

// Dispatches on the global execution mode and problem size.
Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a = false, bool trans_b = false);

} // namespace superman::kernels
