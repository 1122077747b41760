#pragma once

#include <cstdint>
#include <string>

#include "superman/dataset_io.hpp"
#include "superman/signal_graph.hpp"

namespace superman {

// Four single-node two-feature samples labelled x1 XOR x2, replicated.
// Grouped partitioning puts both features in one shape net; singleton
// grouping reduces the encoder to univariate shape functions.
Dataset feature_xor_dataset(std::size_t replicas = 1);

// Two one-node one-feature graphs (signals "A" and "B") labelled XOR.
Dataset set_xor_dataset(std::size_t replicas = 1);

PartitionConfig feature_xor_partition(bool grouped);
PartitionConfig set_xor_partition(bool paired);

// Synthetic irregular multi-signal task. The label mixes a per-entity value
// shift carried by the "trend" signal with a measurement-cadence regime
// carried by the "gaps" signal; gap_coeff = 0 makes the label independent of
// every timestamp. The generative rule is published through the metadata.
struct IrregularSignalSpec {
    std::size_t n_entities = 1000;
    std::uint64_t seed = 0;
    double value_coeff = 1.0;
    double gap_coeff = 2.0;
    double label_noise = 0.5;
    double fast_gap_mean = 1.0;
    double slow_gap_mean = 8.0;
};

struct IrregularSignalMeta {
    double bayes_accuracy = 0.0; // Monte-Carlo estimate under the true rule
    double positive_rate = 0.0;
    std::uint64_t content_hash = 0;
    std::string rule;
};

Dataset irregular_signal_dataset(const IrregularSignalSpec& spec,
                                 IrregularSignalMeta* meta = nullptr);

PartitionConfig irregular_signal_partition();

std::uint64_t dataset_content_hash(const Dataset& dataset);

} // namespace superman
