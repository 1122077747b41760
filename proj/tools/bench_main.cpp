// Times the OpenMP kernels against their serial references and verifies that
// both produce bit-identical results. Run with --verify for the equality
// checks alone (used by the test suite).

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "superman/kernels.hpp"
#include "superman/model.hpp"
#include "superman/parallel.hpp"
#include "superman/rng.hpp"
#include "superman/synth.hpp"
#include "superman/treemetric.hpp"

namespace {

using superman::ExecMode;
using superman::Rng;
using superman::Tensor;

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_best_of(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_seconds();
        fn();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Tensor t({r, c});
    for (double& x : t.values()) x = rng.normal();
    return t;
}

struct BenchCase {
    std::string name;
    double serial_s = 0.0;
    double parallel_s = 0.0;
    bool equal = false;
};

void report(const BenchCase& c) {
    std::printf("%-28s serial %9.4f ms   openmp %9.4f ms   speedup %5.2fx   %s\n",
                c.name.c_str(), c.serial_s * 1e3, c.parallel_s * 1e3,
                c.serial_s / (c.parallel_s > 0 ? c.parallel_s : 1e-12),
                c.equal ? "bit-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const bool verify_only = argc > 1 && std::strcmp(argv[1], "--verify") == 0;
    const int reps = verify_only ? 1 : 3;
    const std::size_t mm_size = verify_only ? 96 : 384;
    const std::size_t fp_size = verify_only ? 28 : 56;
    const std::size_t n_samples = verify_only ? 64 : 512;

    Rng rng(7);
    std::vector<BenchCase> cases;
    bool all_equal = true;

    {
        BenchCase c;
        c.name = "matmul " + std::to_string(mm_size) + "^2";
        const Tensor a = random_matrix(mm_size, mm_size, rng);
        const Tensor b = random_matrix(mm_size, mm_size, rng);
        Tensor out_serial, out_parallel;
        c.serial_s =
            time_best_of([&] { out_serial = superman::kernels::matmul_serial(a, b); }, reps);
        c.parallel_s =
            time_best_of([&] { out_parallel = superman::kernels::matmul_parallel(a, b); }, reps);
        c.equal = out_serial == out_parallel;
        cases.push_back(c);
    }

    {
        BenchCase c;
        c.name = "four_point n=" + std::to_string(fp_size);
        std::vector<double> weights(fp_size - 1);
        for (double& w : weights) w = rng.uniform(0.1, 5.0);
        const superman::DistanceMatrix d = superman::path_distance_matrix(weights);
        superman::FourPointResult r_serial, r_parallel;
        c.serial_s =
            time_best_of([&] { r_serial = superman::four_point_check_serial(d); }, reps);
        c.parallel_s =
            time_best_of([&] { r_parallel = superman::four_point_check_parallel(d); }, reps);
        c.equal = r_serial.holds == r_parallel.holds && r_serial.violation == r_parallel.violation;
        cases.push_back(c);
    }

    {
        BenchCase c;
        c.name = "batch_predict n=" + std::to_string(n_samples);
        superman::IrregularSignalSpec spec;
        spec.n_entities = n_samples;
        spec.seed = 11;
        const superman::Dataset ds = superman::irregular_signal_dataset(spec);
        const superman::PartitionConfig pc = superman::irregular_signal_partition();
        std::map<std::string, std::size_t> dims;
        for (const auto& s : ds.samples) {
            for (const auto& g : s.graphs) dims[g.signal_type] = g.feature_dim();
        }
        superman::ModelConfig mc;
        mc.hidden = 16;
        mc.layers = 3;
        const superman::SupermanModel model =
            superman::build_model(pc.partition, pc.feature_groups, dims, mc, 3);
        std::vector<const superman::GraphSet*> samples;
        for (const auto& s : ds.samples) samples.push_back(&s);
        std::vector<double> out_serial, out_parallel;
        {
            superman::ScopedExecMode m(ExecMode::serial);
            c.serial_s = time_best_of([&] { out_serial = predict_logits(model, samples); }, reps);
        }
        {
            superman::ScopedExecMode m(ExecMode::parallel);
            c.parallel_s =
                time_best_of([&] { out_parallel = predict_logits(model, samples); }, reps);
        }
        c.equal = out_serial == out_parallel;
        cases.push_back(c);
    }

    std::printf("threads available: %d\n", superman::max_threads());
    for (const BenchCase& c : cases) {
        report(c);
        all_equal = all_equal && c.equal;
    }
    if (!all_equal) {
        std::printf("FAILED: parallel kernels diverged from the serial reference\n");
        return 1;
    }
    return 0;
}
