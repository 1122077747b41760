#include "superman/synth.hpp"

#include <cmath>

#include "superman/hashing.hpp"
#include "superman/rng.hpp"

#include "nlohmann/json.hpp"

namespace superman {

namespace {

GraphSet single_node_sample(const std::string& entity, int label,
                            const std::vector<std::pair<std::string, std::vector<double>>>& graphs) {
    GraphSet set;
    set.entity_id = entity;
    set.label = label;
    for (const auto& [type, features] : graphs) {
        Tensor f({1, features.size()});
        for (std::size_t c = 0; c < features.size(); ++c) f(0, c) = features[c];
        set.graphs.push_back(make_signal_graph(type, {0.0}, std::move(f), {}));
    }
    canonicalize(set);
    return set;
}

} // namespace

Dataset feature_xor_dataset(std::size_t replicas) {
    Dataset ds;
    ds.vocabulary = {"xy"};
    for (std::size_t rep = 0; rep < replicas; ++rep) {
        for (int x1 = 0; x1 <= 1; ++x1) {
            for (int x2 = 0; x2 <= 1; ++x2) {
                const std::string entity = "fx" + std::to_string(rep) + "_" + std::to_string(x1) +
                                           std::to_string(x2);
                ds.samples.push_back(single_node_sample(
                    entity, x1 ^ x2,
                    {{"xy", {static_cast<double>(x1), static_cast<double>(x2)}}}));
            }
        }
    }
    return ds;
}

Dataset set_xor_dataset(std::size_t replicas) {
    Dataset ds;
    ds.vocabulary = {"A", "B"};
    for (std::size_t rep = 0; rep < replicas; ++rep) {
        for (int x1 = 0; x1 <= 1; ++x1) {
            for (int x2 = 0; x2 <= 1; ++x2) {
                const std::string entity = "sx" + std::to_string(rep) + "_" + std::to_string(x1) +
                                           std::to_string(x2);
                ds.samples.push_back(single_node_sample(entity, x1 ^ x2,
                                                        {{"A", {static_cast<double>(x1)}},
                                                         {"B", {static_cast<double>(x2)}}}));
            }
        }
    }
    return ds;
}

PartitionConfig feature_xor_partition(bool grouped) {
    PartitionConfig cfg;
    Subset s;
    s.name = "xy";
    s.signal_types = {"xy"};
    cfg.partition.subsets.push_back(std::move(s));
    cfg.feature_groups["xy"] =
        grouped ? FeatureGrouping::single_group(2) : FeatureGrouping::singletons(2);
    return cfg;
}

PartitionConfig set_xor_partition(bool paired) {
    PartitionConfig cfg;
    if (paired) {
        Subset s;
        s.name = "AB";
        s.signal_types = {"A", "B"};
        cfg.partition.subsets.push_back(std::move(s));
    } else {
        for (const std::string t : {"A", "B"}) {
            Subset s;
            s.name = t;
            s.signal_types = {t};
            cfg.partition.subsets.push_back(std::move(s));
        }
    }
    return cfg;
}

namespace {

SignalGraph poisson_path(const std::string& type, std::size_t n, double gap_mean,
                         const std::vector<double>& values, Rng& rng) {
    std::vector<MeasurementRecord> records;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t += rng.exponential(gap_mean);
        MeasurementRecord r;
        r.signal_type = type;
        r.timestamp = t;
        r.features = {values[i]};
        records.push_back(std::move(r));
    }
    return build_path_graph(records);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace

Dataset irregular_signal_dataset(const IrregularSignalSpec& spec, IrregularSignalMeta* meta) {
    if (spec.n_entities == 0) throw InvalidConfig("n_entities must be positive");
    Dataset ds;
    ds.vocabulary = {"trend", "gaps", "noise_a", "noise_b", "noise_c", "noise_d"};

    double bayes_sum = 0.0;
    std::size_t positives = 0;

    for (std::size_t e = 0; e < spec.n_entities; ++e) {
        Rng rng(mix_seed(spec.seed, 0x697267, e));
        GraphSet set;
        set.entity_id = "e" + std::to_string(e);

        // Value signal: per-entity shift mu observed through noisy readings.
        const double mu = rng.normal();
        const std::size_t n_trend = 4 + rng.index(5);
        std::vector<double> trend_values(n_trend);
        for (double& v : trend_values) v = mu + 0.3 * rng.normal();
        set.graphs.push_back(poisson_path("trend", n_trend, 2.0, trend_values, rng));

        // Cadence signal: the measurement rhythm is the information, values
        // are pure noise and the node count is fixed.
        const bool fast = rng.bernoulli(0.5);
        const std::size_t n_gaps = 6;
        std::vector<double> gap_values(n_gaps);
        for (double& v : gap_values) v = rng.normal();
        set.graphs.push_back(poisson_path(
            "gaps", n_gaps, fast ? spec.fast_gap_mean : spec.slow_gap_mean, gap_values, rng));

        // Distractors.
        const std::vector<std::string> noise_types = {"noise_a", "noise_b", "noise_c", "noise_d"};
        for (std::size_t k = 0; k < noise_types.size(); ++k) {
            const bool present = k == 0 ? true : rng.bernoulli(0.5);
            if (!present) continue;
            const std::size_t n = 2 + rng.index(4);
            std::vector<double> values(n);
            for (double& v : values) v = rng.normal();
            set.graphs.push_back(poisson_path(noise_types[k], n, 3.0, values, rng));
        }

        const double score =
            spec.value_coeff * mu + spec.gap_coeff * (fast ? 1.0 : -1.0);
        const double eta = spec.label_noise * rng.normal();
        set.label = score + eta > 0.0 ? 1 : 0;
        positives += static_cast<std::size_t>(set.label);
        bayes_sum += spec.label_noise > 0.0 ? normal_cdf(std::fabs(score) / spec.label_noise)
                                            : 1.0;

        canonicalize(set);
        ds.samples.push_back(std::move(set));
    }

    if (meta != nullptr) {
        meta->bayes_accuracy = bayes_sum / static_cast<double>(spec.n_entities);
        meta->positive_rate =
            static_cast<double>(positives) / static_cast<double>(spec.n_entities);
        meta->content_hash = dataset_content_hash(ds);
        meta->rule = "label = [value_coeff*mu + gap_coeff*(fast ? +1 : -1) + noise > 0]";
    }
    return ds;
}

PartitionConfig irregular_signal_partition() {
    PartitionConfig cfg;
    Subset trend;
    trend.name = "trend";
    trend.signal_types = {"trend"};
    Subset gaps;
    gaps.name = "gaps";
    gaps.signal_types = {"gaps"};
    Subset noise;
    noise.name = "noise";
    noise.signal_types = {"noise_a", "noise_b", "noise_c", "noise_d"};
    cfg.partition.subsets = {std::move(trend), std::move(gaps), std::move(noise)};
    return cfg;
}

std::uint64_t dataset_content_hash(const Dataset& dataset) {
    return fnv1a64(dataset_to_json(dataset).dump());
}

} // namespace superman
