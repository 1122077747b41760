#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "superman/errors.hpp"

namespace superman {

// Dense row-major float64 tensor. Rank 1 and 2 cover everything in practice;
// higher ranks are storable but have no dedicated indexing helpers.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape)
        : shape_(std::move(shape)), values_(count(shape_), 0.0) {}

    Tensor(std::vector<std::size_t> shape, std::vector<double> values)
        : shape_(std::move(shape)), values_(std::move(values)) {
        if (values_.size() != count(shape_)) {
            throw InvalidShape("tensor value count does not match shape");
        }
    }

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

    static Tensor full(std::vector<std::size_t> shape, double v) {
        Tensor t(std::move(shape));
        for (double& x : t.values_) x = v;
        return t;
    }

    static Tensor scalar(double v) { return Tensor({1}, {v}); }

    static Tensor vector(std::vector<double> values) {
        std::size_t n = values.size();
        return Tensor({n}, std::move(values));
    }

    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
        return Tensor({rows, cols}, std::move(values));
    }

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t dim() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::size_t rows() const {
        require_dim(2);
        return shape_[0];
    }
    std::size_t cols() const {
        require_dim(2);
        return shape_[1];
    }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * shape_[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * shape_[1] + j]; }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    void fill(double v) {
        for (double& x : values_) x = v;
    }

    // As-is scalar extraction for size-1 tensors.
    double item() const {
        if (size() != 1) throw InvalidShape("item() requires a single-element tensor");
        return values_[0];
    }

    Tensor reshaped(std::vector<std::size_t> shape) const {
        if (count(shape) != size()) throw InvalidShape("reshape changes element count");
        return Tensor(std::move(shape), values_);
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    bool all_finite() const {
        for (double x : values_) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.shape_ == b.shape_ && a.values_ == b.values_;
    }

private:
    static std::size_t count(const std::vector<std::size_t>& shape) {
        std::size_t n = 1;
        for (std::size_t d : shape) n *= d;
        return shape.empty() ? 0 : n;
    }

    void require_dim(std::size_t d) const {
        if (shape_.size() != d) throw InvalidShape("expected rank-" + std::to_string(d) + " tensor");
    }

    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

inline void ensure_finite(const Tensor& t, const std::string& what) {
    if (!t.all_finite()) throw NumericalError("non-finite values in " + what);
}

inline void ensure_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw NumericalError("non-finite value in " + what);
}

} // namespace superman
