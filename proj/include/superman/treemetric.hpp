#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "superman/signal_graph.hpp"

namespace superman {

// Symmetric nonnegative matrix with zero diagonal. Reads through at() are
// counted so reconstruction cost can be asserted.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<double> values);

    static DistanceMatrix from_tensor(const Tensor& t);

    std::size_t size() const noexcept { return n_; }

    double at(std::size_t i, std::size_t j) const {
        ++read_count_;
        return values_[i * n_ + j];
    }

    // Validates symmetry, nonnegativity, and the zero diagonal.
    void validate(double tol = 1e-9) const;

    std::uint64_t read_count() const noexcept { return read_count_; }
    void reset_read_count() const noexcept { read_count_ = 0; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
    mutable std::uint64_t read_count_ = 0;
};

struct WeightedPath {
    std::vector<std::size_t> order; // vertex labels, endpoint first
    std::vector<double> weights;    // n-1 positive edge weights
};

struct FourPointResult {
    bool holds = true;
    std::array<std::size_t, 4> violation{0, 0, 0, 0}; // lexicographically first
};

// Checks every quadruple: among the three pairings, the two largest sums
// must agree within tol. Exhaustive O(n^4); scan order is i<j<k<l and the
// reported violation is the lexicographically first one even in parallel.
FourPointResult four_point_check(const DistanceMatrix& d, double tol = 1e-9);

FourPointResult four_point_check_serial(const DistanceMatrix& d, double tol = 1e-9);
FourPointResult four_point_check_parallel(const DistanceMatrix& d, double tol = 1e-9);

// Endpoint = row with the largest distance anywhere (ties: lowest index);
// vertices sorted by distance from it; weights are consecutive differences.
// Every pairwise distance is re-verified against the reconstruction, so a
// metric that is not a path metric is rejected.
WeightedPath reconstruct_path(const DistanceMatrix& d, double tol = 1e-9);

// Distances along a weighted path: D[u][v] = |prefix[u] - prefix[v]|.
DistanceMatrix path_distance_matrix(const std::vector<double>& weights);

// |delta| of a signal graph, for feeding temporal gaps into the tree tools.
DistanceMatrix graph_distance_matrix(const SignalGraph& g);

DistanceMatrix distance_matrix_from_csv(const std::string& path);
std::string distance_matrix_to_csv(const DistanceMatrix& d);

} // namespace superman
