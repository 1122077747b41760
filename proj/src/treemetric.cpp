#include "superman/treemetric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "superman/parallel.hpp"

namespace superman {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_) throw InvalidShape("distance matrix must be n*n");
}

DistanceMatrix DistanceMatrix::from_tensor(const Tensor& t) {
    if (t.dim() != 2 || t.rows() != t.cols()) throw InvalidShape("expected a square matrix");
    return DistanceMatrix(t.rows(), t.values());
}

void DistanceMatrix::validate(double tol) const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (std::fabs(values_[i * n_ + i]) > tol) {
            throw InvalidMetric("nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = values_[i * n_ + j];
            if (!std::isfinite(v) || v < -tol) {
                throw InvalidMetric("negative or non-finite entry at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
            }
            if (std::fabs(v - values_[j * n_ + i]) > tol) {
                throw InvalidMetric("asymmetric entries at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
            }
        }
    }
}

namespace {

// True if the quadruple violates the condition: of the three pairing sums,
// the two largest must be equal within tol.
inline bool quadruple_violates(const DistanceMatrix& d, std::size_t i, std::size_t j,
                               std::size_t k, std::size_t l, double tol) {
    const double s1 = d.at(i, j) + d.at(k, l);
    const double s2 = d.at(i, k) + d.at(j, l);
    const double s3 = d.at(i, l) + d.at(j, k);
    double hi = s1, mid = s2;
    if (mid > hi) std::swap(hi, mid);
    if (s3 > hi) {
        mid = hi;
        hi = s3;
    } else if (s3 > mid) {
        mid = s3;
    }
    return hi - mid > tol;
}

} // namespace

FourPointResult four_point_check_serial(const DistanceMatrix& d, double tol) {
    d.validate(tol);
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 3 < n; ++i) {
        for (std::size_t j = i + 1; j + 2 < n; ++j) {
            for (std::size_t k = j + 1; k + 1 < n; ++k) {
                for (std::size_t l = k + 1; l < n; ++l) {
                    if (quadruple_violates(d, i, j, k, l, tol)) {
                        return FourPointResult{false, {i, j, k, l}};
                    }
                }
            }
        }
    }
    return FourPointResult{};
}

FourPointResult four_point_check_parallel(const DistanceMatrix& d, double tol) {
    d.validate(tol);
    const std::size_t n = d.size();
    if (n < 4) return FourPointResult{};
    // Parallel over the leading index; reduce to the lexicographically first
    // violation so the result matches the serial scan.
    std::vector<std::optional<std::array<std::size_t, 4>>> per_i(n);
    parallel_for(n - 3, [&](std::size_t i) {
        for (std::size_t j = i + 1; j + 2 < n; ++j) {
            for (std::size_t k = j + 1; k + 1 < n; ++k) {
                for (std::size_t l = k + 1; l < n; ++l) {
                    if (quadruple_violates(d, i, j, k, l, tol)) {
                        per_i[i] = {i, j, k, l};
                        return;
                    }
                }
            }
        }
    });
    for (const auto& v : per_i) {
        if (v.has_value()) return FourPointResult{false, *v};
    }
    return FourPointResult{};
}

FourPointResult four_point_check(const DistanceMatrix& d, double tol) {
    if (execution_mode() == ExecMode::parallel && d.size() >= 24) {
        return four_point_check_parallel(d, tol);
    }
    return four_point_check_serial(d, tol);
}

WeightedPath reconstruct_path(const DistanceMatrix& d, double tol) {
    d.validate(tol);
    const std::size_t n = d.size();
    WeightedPath path;
    if (n == 0) return path;
    if (n == 1) {
        path.order = {0};
        return path;
    }

    // Endpoint: the vertex attaining the overall maximum distance.
    std::size_t s = 0;
    double best = -1.0;
    for (std::size_t v = 0; v < n; ++v) {
        double row_max = 0.0;
        for (std::size_t u = 0; u < n; ++u) row_max = std::max(row_max, d.at(v, u));
        if (row_max > best) {
            best = row_max;
            s = v;
        }
    }

    path.order.resize(n);
    std::iota(path.order.begin(), path.order.end(), 0);
    std::vector<double> key(n);
    for (std::size_t v = 0; v < n; ++v) key[v] = d.at(s, v);
    std::stable_sort(path.order.begin(), path.order.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double w = key[path.order[i + 1]] - key[path.order[i]];
        if (w <= tol) {
            throw DegenerateWeights("vertices " + std::to_string(path.order[i]) + " and " +
                                    std::to_string(path.order[i + 1]) +
                                    " are equidistant from the endpoint");
        }
        path.weights.push_back(w);
    }

    // A true path metric must reproduce every pairwise distance as the
    // difference of endpoint distances.
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double expect = std::fabs(key[a] - key[b]);
            if (std::fabs(expect - d.at(a, b)) > tol * std::max(1.0, expect)) {
                throw NotAPathMetric("distance (" + std::to_string(a) + "," + std::to_string(b) +
                                     ") is inconsistent with a path layout");
            }
        }
    }
    return path;
}

DistanceMatrix path_distance_matrix(const std::vector<double>& weights) {
    const std::size_t n = weights.size() + 1;
    std::vector<double> prefix(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (weights[i] <= 0.0) throw InvalidMetric("path weights must be positive");
        prefix[i + 1] = prefix[i] + weights[i];
    }
    std::vector<double> values(n * n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) values[u * n + v] = std::fabs(prefix[u] - prefix[v]);
    }
    return DistanceMatrix(n, std::move(values));
}

DistanceMatrix graph_distance_matrix(const SignalGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> values(n * n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) values[u * n + v] = std::fabs(g.delta(u, v));
    }
    return DistanceMatrix(n, std::move(values));
}

DistanceMatrix distance_matrix_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ": bad number '" + cell +
                                 "'");
            }
            ++c;
        }
        if (rows == 0) {
            cols = c;
        } else if (c != cols) {
            throw ParseError("line " + std::to_string(line_no) + ": ragged row");
        }
        ++rows;
    }
    if (rows != cols) throw InvalidMetric("matrix must be square, got " + std::to_string(rows) +
                                          "x" + std::to_string(cols));
    return DistanceMatrix(rows, std::move(values));
}

std::string distance_matrix_to_csv(const DistanceMatrix& d) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (j) out << ',';
            out << d.at(i, j);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace superman
