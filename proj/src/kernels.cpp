#include "superman/kernels.hpp"

#include <cstddef>

#include "superman/parallel.hpp"

namespace superman::kernels {

namespace {

struct MatView {
    const Tensor* t;
    bool trans;
    std::size_t rows() const { return trans ? t->cols() : t->rows(); }
    std::size_t cols() const { return trans ? t->rows() : t->cols(); }
    double at(std::size_t i, std::size_t j) const { return trans ? (*t)(j, i) : (*t)(i, j); }
};

void check_mm(const MatView& a, const MatView& b) {
    if (a.t->dim() != 2 || b.t->dim() != 2) throw InvalidShape("matmul requires rank-2 tensors");
    if (a.cols() != b.rows()) throw InvalidShape("matmul inner dimensions disagree");
}

inline void matmul_row(const MatView& a, const MatView& b, Tensor& out, std::size_t i) {
    const std::size_t k_dim = a.cols();
    const std::size_t n = b.cols();
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < k_dim; ++k) acc += a.at(i, k) * b.at(k, j);
        out(i, j) = acc;
    }
}

} // namespace

Tensor matmul_serial(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b) {
    MatView va{&a, trans_a}, vb{&b, trans_b};
    check_mm(va, vb);
    Tensor out({va.rows(), vb.cols()});
    for (std::size_t i = 0; i < va.rows(); ++i) matmul_row(va, vb, out, i);
    return out;
}

Tensor matmul_parallel(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b) {
    MatView va{&a, trans_a}, vb{&b, trans_b};
    check_mm(va, vb);
    Tensor out({va.rows(), vb.cols()});
    parallel_for(va.rows(), [&](std::size_t i) { matmul_row(va, vb, out, i); });
    return out;
}

Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b) {
    // Parallelism only pays off once the output row work is substantial.
    const std::size_t flops = a.size() * (trans_b ? b.rows() : b.cols());
    if (execution_mode() == ExecMode::parallel && flops >= 16384) {
        return matmul_parallel(a, b, trans_a, trans_b);
    }
    return matmul_serial(a, b, trans_a, trans_b);
}

} // namespace superman::kernels
