#include "doctest.h"

#include "superman/kernels.hpp"
#include "superman/parallel.hpp"
#include "superman/rng.hpp"
#include "superman/synth.hpp"
#include "superman/treemetric.hpp"
#include "superman/model.hpp"

using namespace superman;

namespace {

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Tensor t({r, c});
    for (double& x : t.values()) x = rng.normal();
    return t;
}

} // namespace

TEST_CASE("scoped execution mode restores the previous mode") {
    const ExecMode before = execution_mode();
    {
        ScopedExecMode m(ExecMode::parallel);
        CHECK(execution_mode() == ExecMode::parallel);
        {
            ScopedExecMode inner(ExecMode::serial);
            CHECK(execution_mode() == ExecMode::serial);
        }
        CHECK(execution_mode() == ExecMode::parallel);
    }
    CHECK(execution_mode() == before);
}

TEST_CASE("parallel_for covers every index exactly once") {
    ScopedExecMode m(ExecMode::parallel);
    std::vector<int> hits(257, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("parallel_for propagates exceptions") {
    ScopedExecMode m(ExecMode::parallel);
    CHECK_THROWS_AS(parallel_for(64,
                                 [&](std::size_t i) {
                                     if (i == 13) throw DataError("boom");
                                 }),
                    DataError);
}

TEST_CASE("openmp matmul is bit-identical to the serial reference") {
    Rng rng(3);
    for (auto [r, k, c] : {std::array<std::size_t, 3>{33, 17, 29},
                           std::array<std::size_t, 3>{64, 64, 64},
                           std::array<std::size_t, 3>{5, 101, 7}}) {
        const Tensor a = random_matrix(r, k, rng);
        const Tensor b = random_matrix(k, c, rng);
        CHECK(kernels::matmul_serial(a, b) == kernels::matmul_parallel(a, b));
        const Tensor at = random_matrix(k, r, rng);
        CHECK(kernels::matmul_serial(at, b, true, false) ==
              kernels::matmul_parallel(at, b, true, false));
        const Tensor bt = random_matrix(c, k, rng);
        CHECK(kernels::matmul_serial(a, bt, false, true) ==
              kernels::matmul_parallel(a, bt, false, true));
    }
}

TEST_CASE("four-point scans agree between serial and parallel") {
    Rng rng(5);
    SUBCASE("clean path metric") {
        std::vector<double> weights(30);
        for (double& w : weights) w = rng.uniform(0.1, 3.0);
        const DistanceMatrix d = path_distance_matrix(weights);
        const FourPointResult s = four_point_check_serial(d);
        const FourPointResult p = four_point_check_parallel(d);
        CHECK(s.holds == p.holds);
    }
    SUBCASE("violations report the same lexicographic quadruple") {
        // Random symmetric matrices almost surely violate somewhere.
        const std::size_t n = 20;
        std::vector<double> values(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                values[i * n + j] = values[j * n + i] = rng.uniform(0.5, 2.0);
            }
        }
        const DistanceMatrix d(n, std::move(values));
        const FourPointResult s = four_point_check_serial(d);
        const FourPointResult p = four_point_check_parallel(d);
        REQUIRE(s.holds == p.holds);
        if (!s.holds) CHECK(s.violation == p.violation);
    }
}

TEST_CASE("batch prediction is bit-identical across modes") {
    IrregularSignalSpec spec;
    spec.n_entities = 40;
    spec.seed = 21;
    const Dataset ds = irregular_signal_dataset(spec);
    const PartitionConfig pc = irregular_signal_partition();
    std::map<std::string, std::size_t> dims;
    for (const auto& s : ds.samples) {
        for (const auto& g : s.graphs) dims[g.signal_type] = g.feature_dim();
    }
    ModelConfig mc;
    mc.hidden = 8;
    mc.layers = 3;
    const SupermanModel model = build_model(pc.partition, pc.feature_groups, dims, mc, 2);
    std::vector<const GraphSet*> samples;
    for (const auto& s : ds.samples) samples.push_back(&s);

    std::vector<double> serial_out, parallel_out;
    {
        ScopedExecMode m(ExecMode::serial);
        serial_out = predict_logits(model, samples);
    }
    {
        ScopedExecMode m(ExecMode::parallel);
        parallel_out = predict_logits(model, samples);
    }
    CHECK(serial_out == parallel_out);
}
