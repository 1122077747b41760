#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "superman/tensor.hpp"

namespace superman {

// One raw observation: feature 0 is the observed value by convention,
// further entries are auxiliary features of the same measurement.
struct MeasurementRecord {
    std::string entity_id;
    std::string signal_type;
    double timestamp = 0.0;
    std::vector<double> features;
};

// Edge orientation for constructed path graphs. Reachability follows edge
// direction; earlier_to_later means a node can be reached from every earlier
// measurement of the same signal.
enum class PathDirection { earlier_to_later, later_to_earlier, bidirectional };

PathDirection path_direction_from_string(const std::string& s);
std::string to_string(PathDirection d);

// A signal type's measurements as a directed graph. delta stores the literal
// signed gap t_u - t_v for every pair; reach_mask records where a directed
// path u -> v exists (diagonal always true). Consumers decide whether to gate
// by the mask.
struct SignalGraph {
    std::string signal_type;
    Tensor node_features;                // [n, d]
    std::vector<double> node_timestamps; // n
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    Tensor delta;                    // [n, n]
    std::vector<std::uint8_t> reach; // n*n row-major

    std::size_t node_count() const { return node_timestamps.size(); }
    std::size_t feature_dim() const {
        return node_features.dim() == 2 ? node_features.cols() : 0;
    }
    bool reachable(std::size_t u, std::size_t v) const { return reach[u * node_count() + v] != 0; }

    friend bool operator==(const SignalGraph& a, const SignalGraph& b) {
        return a.signal_type == b.signal_type && a.node_features == b.node_features &&
               a.node_timestamps == b.node_timestamps && a.edges == b.edges &&
               a.delta == b.delta && a.reach == b.reach;
    }
};

// Fills delta from timestamps and reach from the transitive closure of edges.
void recompute_derived(SignalGraph& g);

// General constructor for explicitly laid out graphs (e.g. cascades).
SignalGraph make_signal_graph(std::string signal_type, std::vector<double> timestamps,
                              Tensor node_features,
                              std::vector<std::pair<std::size_t, std::size_t>> edges);

// Sorts records by timestamp (ties keep input order), links consecutive
// measurements per the direction convention.
SignalGraph build_path_graph(const std::vector<MeasurementRecord>& records,
                             PathDirection direction = PathDirection::earlier_to_later);

enum class DeltaPolicy { full, adjacent_only, window };

DeltaPolicy delta_policy_from_string(const std::string& s);
std::string to_string(DeltaPolicy p);

// Intersects reach with the policy pattern. adjacent_only keeps the diagonal
// plus index-adjacent pairs; window keeps pairs within w index steps.
SignalGraph mask_delta(const SignalGraph& graph, DeltaPolicy policy, std::size_t window = 0);

// Disjoint, complete partition of feature indices {0..d-1}.
struct FeatureGrouping {
    std::vector<std::vector<std::size_t>> groups;

    static FeatureGrouping singletons(std::size_t d);
    static FeatureGrouping single_group(std::size_t d);

    std::size_t feature_dim() const;
    std::size_t group_count() const { return groups.size(); }
    bool all_singleton() const;
    void validate() const;

    friend bool operator==(const FeatureGrouping&, const FeatureGrouping&) = default;
};

// A collector subset receives every graph matching its structural predicate,
// regardless of signal type; used when many same-type graphs must mix.
enum class CollectorPredicate { none, single_node, any };

CollectorPredicate collector_from_string(const std::string& s);
std::string to_string(CollectorPredicate c);

struct Subset {
    std::string name;
    std::vector<std::string> signal_types;
    CollectorPredicate collector = CollectorPredicate::none;

    bool is_collector() const { return collector != CollectorPredicate::none; }
    // A subset that can hold more than one graph mixes non-linearly.
    bool multi_graph() const { return is_collector() || signal_types.size() > 1; }

    friend bool operator==(const Subset&, const Subset&) = default;
};

struct SubsetPartition {
    std::vector<Subset> subsets;

    std::size_t subset_count() const { return subsets.size(); }
    // Index of the subset declaring this signal type, or -1.
    int subset_of(const std::string& signal_type) const;

    friend bool operator==(const SubsetPartition&, const SubsetPartition&) = default;
};

// One sample: a set of signal graphs plus its binary label.
struct GraphSet {
    std::string entity_id;
    int label = 0;
    std::vector<SignalGraph> graphs;

    friend bool operator==(const GraphSet&, const GraphSet&) = default;
};

// Stable content ordering so that set-level accumulations are independent of
// input order.
void canonicalize(GraphSet& set);

struct Dataset {
    std::vector<std::string> vocabulary;
    std::string timestamp_unit = "days";
    std::vector<GraphSet> samples;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Maps each graph of a sample to its subset index. Collector predicates take
// precedence over signal-type membership; unknown types with no matching
// collector are a SchemaError. Duplicate signal types must land in a
// collector subset.
std::vector<std::size_t> bind_graphs(const SubsetPartition& partition, const GraphSet& set);

struct PartitionReport {
    std::size_t subset_count = 0;
    std::vector<std::size_t> signals_per_subset;
    std::map<std::string, std::size_t> feature_dim_per_subset_name;
};

// Checks that subsets disjointly cover the vocabulary and that every subset's
// member signals share one feature dimensionality and grouping (they share an
// encoder). groupings may omit signals, meaning the default grouping.
PartitionReport validate_partition(const SubsetPartition& partition,
                                   const std::map<std::string, FeatureGrouping>& groupings,
                                   const std::vector<std::string>& vocabulary,
                                   const std::map<std::string, std::size_t>& feature_dims);

// Per-signal per-feature first/second moments from a training split.
struct FeatureStats {
    struct Moments {
        std::vector<double> mean;
        std::vector<double> stddev;
    };
    std::map<std::string, Moments> per_signal;

    bool empty() const { return per_signal.empty(); }
};

FeatureStats compute_feature_stats(const std::vector<GraphSet>& samples,
                                   const std::vector<const GraphSet*>& subset = {});

// Z-scores every node feature with the supplied (training) statistics.
// Features with stddev below 1e-12 are centered only.
void normalize_features(Dataset& dataset, const FeatureStats& stats);
void normalize_features(GraphSet& set, const FeatureStats& stats);

} // namespace superman
