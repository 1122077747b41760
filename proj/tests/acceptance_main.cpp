// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Runs single-threaded so every number here is reproducible run to run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <vector>

#include "superman/commands.hpp"
#include "superman/dataset_io.hpp"
#include "superman/interpret.hpp"
#include "superman/metrics.hpp"
#include "superman/model.hpp"
#include "superman/parallel.hpp"
#include "superman/synth.hpp"
#include "superman/training.hpp"
#include "superman/treemetric.hpp"
#include "superman/xor_bench.hpp"

#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using namespace superman;

namespace {

int g_failures = 0;

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

std::map<std::string, std::size_t> dims_of(const Dataset& ds) {
    std::map<std::string, std::size_t> dims;
    for (const auto& s : ds.samples) {
        for (const auto& g : s.graphs) dims[g.signal_type] = g.feature_dim();
    }
    return dims;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
    const double t0 = now_s();
    const XorTrainSettings grouped_settings = feature_xor_settings();
    std::size_t solved = 0;
    std::size_t max_steps = 0;
    const double grouped_t0 = now_s();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const XorTrainOutcome o = train_feature_xor(true, seed, grouped_settings);
        solved += static_cast<std::size_t>(o.reached_perfect && o.steps_to_perfect <= 2000);
        max_steps = std::max(max_steps, o.steps_to_perfect);
    }
    const double grouped_elapsed = now_s() - grouped_t0;

    double cap = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const XorTrainOutcome o = train_feature_xor(false, seed, grouped_settings);
        cap = std::max(cap, o.best_accuracy);
    }
    const bool symbolic = feature_xor_thresholds_infeasible();

    const bool pass = solved == 20 && grouped_elapsed < 30.0 && cap <= 0.75 && symbolic;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "grouped %zu/20 in %.1fs, worst %zu steps; singleton cap %.2f; system infeasible=%d",
                  solved, grouped_elapsed, max_steps, cap, symbolic ? 1 : 0);
    report(1, "feature-XOR separation", pass, detail, now_s() - t0);
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
    const double t0 = now_s();
    std::size_t solved = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        solved += static_cast<std::size_t>(train_set_xor(true, seed).reached_perfect);
    }
    double cap = 0.0;
    XorTrainSettings cap_settings = set_xor_settings();
    cap_settings.max_steps = 4000;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cap = std::max(cap, train_set_xor(false, seed, cap_settings).best_accuracy);
    }
    const bool symbolic = set_xor_thresholds_infeasible();
    const std::vector<double> outputs = hardcoded_set_xor_outputs();
    const bool witness = outputs == std::vector<double>{0.0, 1.0, 1.0, 0.0};

    const bool pass = solved == 20 && cap <= 0.75 && symbolic && witness;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "paired %zu/20; singleton cap %.2f; infeasible=%d; hardcoded (0,1,1,0)=%d",
                  solved, cap, symbolic ? 1 : 0, witness ? 1 : 0);
    report(2, "set-XOR separation", pass, detail, now_s() - t0);
}

// ---------------------------------------------------------------- criterion 3
SignalGraph random_graph(const std::string& type, std::size_t d, Rng& rng) {
    const std::size_t n = 1 + rng.index(4);
    std::vector<double> ts;
    double t = 0.0;
    Tensor f({n, d});
    for (std::size_t i = 0; i < n; ++i) {
        t += rng.exponential(2.0);
        ts.push_back(t);
        for (std::size_t c = 0; c < d; ++c) f(i, c) = rng.normal();
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return make_signal_graph(type, std::move(ts), std::move(f), std::move(edges));
}

void criterion_3() {
    const double t0 = now_s();
    double worst = 0.0;
    std::size_t checked_params = 0;
    Rng rng(2024);

    for (int config = 0; config < 100; ++config) {
        // Random architecture: one singleton subset and, on most draws, one
        // mixed pair sharing an encoder and a DeepSets mixer.
        const std::size_t d1 = 1 + rng.index(3);
        const std::size_t d2 = 1 + rng.index(2);
        const bool with_pair = rng.bernoulli(0.7);
        SubsetPartition partition;
        Subset a;
        a.name = "solo";
        a.signal_types = {"solo"};
        partition.subsets.push_back(a);
        if (with_pair) {
            Subset b;
            b.name = "pair";
            b.signal_types = {"p1", "p2"};
            partition.subsets.push_back(b);
        }
        std::map<std::string, FeatureGrouping> groupings;
        groupings["solo"] = rng.bernoulli(0.5) ? FeatureGrouping::single_group(d1)
                                               : FeatureGrouping::singletons(d1);
        std::map<std::string, std::size_t> dims{{"solo", d1}, {"p1", d2}, {"p2", d2}};

        ModelConfig mc;
        mc.hidden = 3 + rng.index(3);
        mc.layers = 3;
        mc.activation = rng.bernoulli(0.5) ? Activation::tanh : Activation::relu;
        mc.delta_mode = rng.bernoulli(0.5) ? DeltaMode::masked : DeltaMode::literal;
        mc.delta_policy = rng.bernoulli(0.3) ? DeltaPolicy::adjacent_only : DeltaPolicy::full;
        SupermanModel model = build_model(partition, groupings, dims, mc,
                                          1000 + static_cast<std::uint64_t>(config));
        // Zero-init biases park the relu pre-activations of zero-gap pairs
        // exactly on the kink, where central differences are meaningless;
        // jitter moves every evaluation to a generic point.
        model.visit_params([&](const std::string&, Tensor& t) {
            for (double& x : t.values()) x += rng.uniform(0.05, 0.15);
        });

        std::vector<GraphSet> samples(2);
        for (std::size_t s = 0; s < 2; ++s) {
            samples[s].entity_id = "s" + std::to_string(s);
            samples[s].label = static_cast<int>(s);
            samples[s].graphs.push_back(random_graph("solo", d1, rng));
            if (with_pair) {
                samples[s].graphs.push_back(random_graph("p1", d2, rng));
                if (rng.bernoulli(0.8)) samples[s].graphs.push_back(random_graph("p2", d2, rng));
            }
            canonicalize(samples[s]);
        }
        std::vector<const GraphSet*> batch{&samples[0], &samples[1]};

        ParamRegistry reg;
        model.collect_params(reg);

        Tape tape;
        ModelVars vars = bind_model(tape, model);
        Var loss = tape_batch_loss(tape, vars, batch);
        tape.backward(loss);

        auto loss_value = [&]() {
            Tape t(false);
            ModelVars v = bind_model(t, model);
            return t.value(tape_batch_loss(t, v, batch)).item();
        };

        const double h = 1e-6;
        for (std::size_t p = 0; p < reg.count(); ++p) {
            const Tensor analytic = tape.grad(Var{static_cast<int>(p)});
            Tensor& tensor = reg.tensor(p);
            for (std::size_t k = 0; k < tensor.size(); ++k) {
                const double saved = tensor[k];
                tensor[k] = saved + h;
                const double up = loss_value();
                tensor[k] = saved - h;
                const double down = loss_value();
                tensor[k] = saved;
                const double fd = (up - down) / (2.0 * h);
                const double denom = std::max({std::fabs(fd), std::fabs(analytic[k]), 1e-3});
                worst = std::max(worst, std::fabs(fd - analytic[k]) / denom);
                ++checked_params;
            }
        }
    }
    const double elapsed = now_s() - t0;
    const bool pass = worst < 1e-4 && elapsed < 60.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "100 configs, %zu parameters, max rel err %.2e",
                  checked_params, worst);
    report(3, "gradient correctness", pass, detail, elapsed);
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
    const double t0 = now_s();
    IrregularSignalSpec spec;
    spec.n_entities = 300;
    spec.seed = 11;
    const Dataset train_ds = irregular_signal_dataset(spec);
    const PartitionConfig pc = irregular_signal_partition();
    ModelConfig mc;
    mc.hidden = 16;
    mc.layers = 3;
    mc.time_scale = 5.0;
    SupermanModel model = build_model(pc.partition, pc.feature_groups, dims_of(train_ds), mc, 1);
    const SplitIndices split = split_dataset(spec.n_entities, 0.7, 0.15, 5);
    std::vector<const GraphSet*> tv;
    for (std::size_t i : split.train) tv.push_back(&train_ds.samples[i]);
    model.normalization = compute_feature_stats(train_ds.samples, tv);
    TrainConfig tc;
    tc.epochs = 10;
    tc.batch_size = 32;
    tc.lr_max = 3e-3;
    tc.dropout = 0.1;
    tc.hidden = 16;
    tc.layers = 3;
    tc.seed = 1;
    const TrainResult trained = train(model, train_ds, split, tc);

    spec.n_entities = 1000;
    spec.seed = 99;
    const Dataset fresh = irregular_signal_dataset(spec);

    double worst_total = 0.0;
    double worst_chain = 0.0;
    for (const GraphSet& sample : fresh.samples) {
        const ContributionReport report_ = contribution_report(trained.model, sample);
        worst_total = std::max(worst_total, report_.reconstruction_residual);
        for (const auto& g : report_.graphs) {
            if (!g.node_attributable) continue;
            double node_sum = 0.0;
            for (double v : g.node_contributions) node_sum += v;
            worst_chain = std::max(worst_chain, std::fabs(node_sum - g.contribution));
            worst_chain = std::max(
                worst_chain,
                std::fabs(g.contribution - report_.subset_contributions[g.subset_index]));
        }
    }
    const bool pass = worst_total < 1e-9 && worst_chain < 1e-9;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "1000 samples; max |logit-bias-sum| %.1e; max chain gap %.1e", worst_total,
                  worst_chain);
    report(4, "additive faithfulness", pass, detail, now_s() - t0);
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
    const double t0 = now_s();
    SubsetPartition partition;
    Subset s;
    s.name = "mix";
    s.signal_types = {"a", "b", "c", "d", "e"};
    partition.subsets.push_back(s);
    std::map<std::string, std::size_t> dims;
    for (const std::string t : {"a", "b", "c", "d", "e"}) dims[t] = 2;
    ModelConfig mc;
    mc.hidden = 8;
    mc.layers = 3;
    mc.activation = Activation::tanh;
    const SupermanModel model = build_model(partition, {}, dims, mc, 77);

    Rng rng(7);
    bool all_equal = true;
    std::size_t orderings = 0;
    for (std::size_t k = 2; k <= 5; ++k) {
        std::vector<SignalGraph> graphs;
        const std::vector<std::string> types = {"a", "b", "c", "d", "e"};
        for (std::size_t i = 0; i < k; ++i) graphs.push_back(random_graph(types[i], 2, rng));

        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        double reference = 0.0;
        bool first = true;
        do {
            GraphSet sample;
            sample.entity_id = "perm";
            for (std::size_t i : order) sample.graphs.push_back(graphs[i]);
            const double logit = forward(model, sample);
            if (first) {
                reference = logit;
                first = false;
            } else {
                all_equal = all_equal && logit == reference;
            }
            ++orderings;
        } while (std::next_permutation(order.begin(), order.end()));
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "%zu orderings over set sizes 2..5, bit-identical",
                  orderings);
    report(5, "permutation invariance", all_equal, detail, now_s() - t0);
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
    const double t0 = now_s();
    Rng rng(64);
    bool all_ok = true;
    std::size_t trials = 0;
    for (; trials < 1000; ++trials) {
        const std::size_t n = 2 + rng.index(63);
        std::vector<double> weights(n - 1);
        for (double& w : weights) w = rng.uniform(0.01, 10.0);
        const DistanceMatrix d = path_distance_matrix(weights);
        if (!four_point_check(d).holds) {
            all_ok = false;
            break;
        }
        WeightedPath path;
        try {
            path = reconstruct_path(d);
        } catch (const Error&) {
            all_ok = false;
            break;
        }
        const bool forward_order = path.order.front() == 0 && path.order.back() == n - 1;
        const bool reverse_order = path.order.front() == n - 1 && path.order.back() == 0;
        if (!(forward_order || reverse_order) || path.weights.size() != weights.size()) {
            all_ok = false;
            break;
        }
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double expect = forward_order ? weights[i] : weights[weights.size() - 1 - i];
            if (std::fabs(path.weights[i] - expect) > 1e-9) {
                all_ok = false;
                break;
            }
        }
        if (!all_ok) break;
    }

    bool star_rejected = false;
    try {
        std::vector<double> values(16, 0.0);
        const std::vector<double> radii = {1.0, 2.0, 3.0, 4.0};
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                values[i * 4 + j] = i == j ? 0.0 : radii[i] + radii[j];
            }
        }
        (void)reconstruct_path(DistanceMatrix(4, std::move(values)));
    } catch (const NotAPathMetric&) {
        star_rejected = true;
    }
    const double elapsed = now_s() - t0;
    const bool pass = all_ok && star_rejected && trials == 1000 && elapsed < 30.0;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%zu/1000 roundtrips ok; star rejected=%d", trials,
                  star_rejected ? 1 : 0);
    report(6, "tree-metric roundtrip", pass, detail, elapsed);
}

// ---------------------------------------------------------------- criterion 7
double auprc_for(const Dataset& ds, const SplitIndices& split, ModelAblation ablation,
                 std::uint64_t seed) {
    const PartitionConfig pc = irregular_signal_partition();
    ModelConfig mc;
    mc.hidden = 16;
    mc.layers = 3;
    mc.time_scale = 5.0;
    mc.ablation = ablation;
    SupermanModel model = build_model(pc.partition, pc.feature_groups, dims_of(ds), mc, seed);
    std::vector<const GraphSet*> tv;
    for (std::size_t i : split.train) tv.push_back(&ds.samples[i]);
    model.normalization = compute_feature_stats(ds.samples, tv);
    TrainConfig tc;
    tc.epochs = 22;
    tc.batch_size = 32;
    tc.lr_max = 3e-3;
    tc.dropout = 0.1;
    tc.hidden = 16;
    tc.layers = 3;
    tc.seed = seed;
    const TrainResult r = train(model, ds, split, tc);
    return evaluate(r.model, ds, split.test).auprc;
}

void criterion_7() {
    const double t0 = now_s();
    auto mean_gap = [&](double gap_coeff) {
        IrregularSignalSpec spec;
        spec.n_entities = 900;
        spec.seed = 42;
        spec.gap_coeff = gap_coeff;
        const Dataset ds = irregular_signal_dataset(spec);
        const SplitIndices split = split_dataset(spec.n_entities, 0.6, 0.15, 7);
        double full = 0.0, ablated = 0.0;
        for (std::uint64_t seed : {0, 1, 2}) {
            full += auprc_for(ds, split, ModelAblation::none, seed);
            ablated += auprc_for(ds, split, ModelAblation::rho_const_one, seed);
        }
        return std::pair<double, double>{full / 3.0, ablated / 3.0};
    };
    const auto [full_on, ablated_on] = mean_gap(2.0);
    const auto [full_off, ablated_off] = mean_gap(0.0);

    const double effect_gap = full_on - ablated_on;
    const double null_gap = std::fabs(full_off - ablated_off);
    const double elapsed = now_s() - t0;
    const bool pass = effect_gap >= 0.05 && null_gap <= 0.01 && elapsed < 300.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "gap on: full %.3f vs rho1 %.3f (+%.1f pts); gap off: |%.3f - %.3f| = %.2f pts",
                  full_on, ablated_on, 100.0 * effect_gap, full_off, ablated_off,
                  100.0 * null_gap);
    report(7, "ablation sensitivity", pass, detail, elapsed);
}

// ---------------------------------------------------------------- criterion 8
double auprc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<double> thresholds = scores;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    std::size_t pos = 0;
    for (int y : labels) pos += static_cast<std::size_t>(y);
    double area = 0.0, prev_recall = 0.0;
    for (double t : thresholds) {
        std::size_t tp = 0, predicted = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= t) {
                ++predicted;
                tp += static_cast<std::size_t>(labels[i]);
            }
        }
        const double precision = static_cast<double>(tp) / static_cast<double>(predicted);
        const double recall = static_cast<double>(tp) / static_cast<double>(pos);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return area;
}

double auroc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
        }
    }
    return wins / static_cast<double>(pairs);
}

double ece_oracle(const std::vector<double>& probs, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t b = 0; b < 10; ++b) {
        double conf = 0.0, acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            std::size_t bin = static_cast<std::size_t>(probs[i] * 10.0);
            if (bin > 9) bin = 9;
            if (bin != b) continue;
            conf += probs[i];
            acc += labels[i];
            ++count;
        }
        if (count == 0) continue;
        total += (static_cast<double>(count) / static_cast<double>(probs.size())) *
                 std::fabs(acc / count - conf / count);
    }
    return total;
}

void criterion_8() {
    const double t0 = now_s();
    Rng rng(88);
    double worst_rank = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng.index(17);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = std::round(rng.uniform() * 6.0) / 6.0;
            labels[i] = rng.bernoulli(0.5) ? 1 : 0;
        }
        labels[0] = 0;
        labels[n - 1] = 1;
        worst_rank = std::max(worst_rank,
                              std::fabs(auprc(scores, labels) - auprc_oracle(scores, labels)));
        worst_rank = std::max(worst_rank,
                              std::fabs(auroc(scores, labels) - auroc_oracle(scores, labels)));
    }

    double worst_ece = 0.0;
    for (int c = 0; c < 10; ++c) {
        const std::size_t n = 4 + static_cast<std::size_t>(c);
        std::vector<double> probs(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            probs[i] = std::min(1.0, (static_cast<double>(i) + 0.5) / static_cast<double>(n) +
                                         0.07 * c);
            labels[i] = (i + static_cast<std::size_t>(c)) % 2 == 0 ? 1 : 0;
        }
        worst_ece = std::max(worst_ece, std::fabs(ece(probs, labels) - ece_oracle(probs, labels)));
    }

    // Zero-noise rows must be exactly zero.
    IrregularSignalSpec spec;
    spec.n_entities = 40;
    spec.seed = 3;
    const Dataset ds = irregular_signal_dataset(spec);
    const PartitionConfig pc = irregular_signal_partition();
    ModelConfig mc;
    mc.hidden = 8;
    mc.layers = 3;
    const SupermanModel model = build_model(pc.partition, pc.feature_groups, dims_of(ds), mc, 5);
    std::vector<std::size_t> indices(ds.samples.size());
    std::iota(indices.begin(), indices.end(), 0);
    bool zero_rows_exact = true;
    for (const NoiseKind kind :
         {NoiseKind::additive, NoiseKind::multiplicative, NoiseKind::temporal}) {
        NoiseSpec nspec;
        nspec.kind = kind;
        nspec.sigmas = {0.0};
        nspec.n_seeds = 3;
        const auto rows = noise_robustness(model, ds, indices, nspec, 9);
        zero_rows_exact = zero_rows_exact && rows[0].d_auroc_pct_mean == 0.0 &&
                          rows[0].d_auprc_pct_mean == 0.0 && rows[0].d_auroc_pct_std == 0.0 &&
                          rows[0].d_auprc_pct_std == 0.0;
    }

    const bool pass = worst_rank < 1e-12 && worst_ece < 1e-12 && zero_rows_exact;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "rank metrics err %.1e; ece err %.1e; zero-noise rows exact=%d", worst_rank,
                  worst_ece, zero_rows_exact ? 1 : 0);
    report(8, "metric oracles", pass, detail, now_s() - t0);
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
    const double t0 = now_s();
    const fs::path dir = fs::temp_directory_path() / "superman_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);

    IrregularSignalSpec spec;
    spec.n_entities = 80;
    spec.seed = 31;
    const Dataset ds = irregular_signal_dataset(spec);
    save_dataset(ds, (dir / "dataset.json").string());

    RunConfig config;
    config.dataset_path = (dir / "dataset.json").string();
    config.partition = irregular_signal_partition();
    config.train.epochs = 3;
    config.train.batch_size = 16;
    config.train.lr_max = 3e-3;
    config.train.dropout = 0.1;
    config.train.hidden = 32;
    config.train.layers = 3;
    config.seeds = {0, 1};
    config.split_train = 0.7;
    config.split_val = 0.15;
    config.split_seed = 4;
    config.deterministic = true;

    config.out_dir = (dir / "run_a").string();
    cmd_train(config);
    config.out_dir = (dir / "run_b").string();
    cmd_train(config);

    bool identical = true;
    for (const std::string name :
         {"metrics.json", "checkpoint_seed0.json", "checkpoint_seed1.json", "history_seed0.csv",
          "history_seed1.csv"}) {
        identical = identical && read_text_file((dir / "run_a" / name).string()) ==
                                     read_text_file((dir / "run_b" / name).string());
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "two deterministic runs: metrics, checkpoints, histories byte-identical=%d",
                  identical ? 1 : 0);
    report(9, "training determinism", identical, detail, now_s() - t0);
}

} // namespace

int main() {
    set_execution_mode(ExecMode::serial);
    const double t0 = now_s();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("%s: %d criterion(s) failed [total %.1fs]\n",
                g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures,
                now_s() - t0);
    return g_failures == 0 ? 0 : 1;
}
