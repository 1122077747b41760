#include "superman/signal_graph.hpp"

#include <algorithm>
#include <numeric>

namespace superman {

PathDirection path_direction_from_string(const std::string& s) {
    if (s == "earlier_to_later") return PathDirection::earlier_to_later;
    if (s == "later_to_earlier") return PathDirection::later_to_earlier;
    if (s == "bidirectional") return PathDirection::bidirectional;
    throw InvalidConfig("unknown path direction: " + s);
}

std::string to_string(PathDirection d) {
    switch (d) {
        case PathDirection::earlier_to_later: return "earlier_to_later";
        case PathDirection::later_to_earlier: return "later_to_earlier";
        case PathDirection::bidirectional: return "bidirectional";
    }
    return "earlier_to_later";
}

void recompute_derived(SignalGraph& g) {
    const std::size_t n = g.node_timestamps.size();
    g.delta = Tensor({n, n});
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            g.delta(u, v) = g.node_timestamps[u] - g.node_timestamps[v];
        }
    }
    // Transitive closure by forward BFS from each node.
    g.reach.assign(n * n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& [src, dst] : g.edges) {
        if (src >= n || dst >= n) throw InvalidNode("edge endpoint out of range");
        out[src].push_back(dst);
    }
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        stack.assign(1, s);
        g.reach[s * n + s] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : out[u]) {
                if (!g.reach[s * n + v]) {
                    g.reach[s * n + v] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
}

SignalGraph make_signal_graph(std::string signal_type, std::vector<double> timestamps,
                              Tensor node_features,
                              std::vector<std::pair<std::size_t, std::size_t>> edges) {
    SignalGraph g;
    g.signal_type = std::move(signal_type);
    const std::size_t n = timestamps.size();
    if (node_features.dim() != 2 || node_features.rows() != n) {
        throw InvalidShape("node_features must be [n, d] with one row per timestamp");
    }
    for (double t : timestamps) ensure_finite(t, "timestamp");
    ensure_finite(node_features, "node features");
    g.node_timestamps = std::move(timestamps);
    g.node_features = std::move(node_features);
    g.edges = std::move(edges);
    recompute_derived(g);
    return g;
}

SignalGraph build_path_graph(const std::vector<MeasurementRecord>& records,
                             PathDirection direction) {
    if (records.empty()) throw EmptySignal("no measurements for signal");
    const std::string& type = records.front().signal_type;
    const std::size_t d = records.front().features.size();
    if (d == 0) throw InvalidShape("measurements need at least one feature");
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    for (const MeasurementRecord& r : records) {
        if (r.signal_type != type) {
            throw InvalidConfig("build_path_graph requires a single signal type, got " + type +
                                " and " + r.signal_type);
        }
        if (r.features.size() != d) {
            throw InvalidShape("inconsistent feature width within signal " + type);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].timestamp < records[b].timestamp;
    });

    const std::size_t n = records.size();
    std::vector<double> timestamps(n);
    Tensor features({n, d});
    for (std::size_t i = 0; i < n; ++i) {
        const MeasurementRecord& r = records[order[i]];
        timestamps[i] = r.timestamp;
        for (std::size_t j = 0; j < d; ++j) features(i, j) = r.features[j];
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        switch (direction) {
            case PathDirection::earlier_to_later: edges.emplace_back(i, i + 1); break;
            case PathDirection::later_to_earlier: edges.emplace_back(i + 1, i); break;
            case PathDirection::bidirectional:
                edges.emplace_back(i, i + 1);
                edges.emplace_back(i + 1, i);
                break;
        }
    }
    return make_signal_graph(type, std::move(timestamps), std::move(features), std::move(edges));
}

DeltaPolicy delta_policy_from_string(const std::string& s) {
    if (s == "full") return DeltaPolicy::full;
    if (s == "adjacent_only") return DeltaPolicy::adjacent_only;
    if (s == "window") return DeltaPolicy::window;
    throw InvalidConfig("unknown delta policy: " + s);
}

std::string to_string(DeltaPolicy p) {
    switch (p) {
        case DeltaPolicy::full: return "full";
        case DeltaPolicy::adjacent_only: return "adjacent_only";
        case DeltaPolicy::window: return "window";
    }
    return "full";
}

SignalGraph mask_delta(const SignalGraph& graph, DeltaPolicy policy, std::size_t window) {
    if (policy == DeltaPolicy::full) return graph;
    const std::size_t w = policy == DeltaPolicy::adjacent_only ? 1 : window;
    if (w < 1) throw InvalidConfig("window must be at least 1");
    SignalGraph out = graph;
    const std::size_t n = graph.node_count();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const std::size_t gap = u > v ? u - v : v - u;
            if (gap > w) out.reach[u * n + v] = 0;
        }
    }
    return out;
}

FeatureGrouping FeatureGrouping::singletons(std::size_t d) {
    FeatureGrouping g;
    for (std::size_t i = 0; i < d; ++i) g.groups.push_back({i});
    return g;
}

FeatureGrouping FeatureGrouping::single_group(std::size_t d) {
    FeatureGrouping g;
    g.groups.emplace_back();
    for (std::size_t i = 0; i < d; ++i) g.groups.back().push_back(i);
    return g;
}

std::size_t FeatureGrouping::feature_dim() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
}

bool FeatureGrouping::all_singleton() const {
    for (const auto& g : groups) {
        if (g.size() != 1) return false;
    }
    return true;
}

void FeatureGrouping::validate() const {
    const std::size_t d = feature_dim();
    std::vector<bool> seen(d, false);
    if (groups.empty()) throw PartitionError("feature grouping has no groups");
    for (const auto& g : groups) {
        if (g.empty()) throw PartitionError("empty feature group");
        for (std::size_t idx : g) {
            if (idx >= d || seen[idx]) {
                throw PartitionError("feature groups must disjointly cover 0.." +
                                     std::to_string(d - 1));
            }
            seen[idx] = true;
        }
    }
}

CollectorPredicate collector_from_string(const std::string& s) {
    if (s == "none") return CollectorPredicate::none;
    if (s == "single_node") return CollectorPredicate::single_node;
    if (s == "any") return CollectorPredicate::any;
    throw InvalidConfig("unknown collector predicate: " + s);
}

std::string to_string(CollectorPredicate c) {
    switch (c) {
        case CollectorPredicate::none: return "none";
        case CollectorPredicate::single_node: return "single_node";
        case CollectorPredicate::any: return "any";
    }
    return "none";
}

int SubsetPartition::subset_of(const std::string& signal_type) const {
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto& types = subsets[i].signal_types;
        if (std::find(types.begin(), types.end(), signal_type) != types.end()) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

namespace {

bool collector_matches(CollectorPredicate c, const SignalGraph& g) {
    switch (c) {
        case CollectorPredicate::none: return false;
        case CollectorPredicate::single_node: return g.node_count() == 1;
        case CollectorPredicate::any: return true;
    }
    return false;
}

std::vector<double> graph_sort_key(const SignalGraph& g) {
    std::vector<double> key;
    key.reserve(2 + g.node_timestamps.size() + g.node_features.size());
    key.push_back(static_cast<double>(g.node_count()));
    key.insert(key.end(), g.node_timestamps.begin(), g.node_timestamps.end());
    key.insert(key.end(), g.node_features.values().begin(), g.node_features.values().end());
    return key;
}

} // namespace

void canonicalize(GraphSet& set) {
    std::stable_sort(set.graphs.begin(), set.graphs.end(),
                     [](const SignalGraph& a, const SignalGraph& b) {
                         if (a.signal_type != b.signal_type) return a.signal_type < b.signal_type;
                         return graph_sort_key(a) < graph_sort_key(b);
                     });
}

std::vector<std::size_t> bind_graphs(const SubsetPartition& partition, const GraphSet& set) {
    std::vector<std::size_t> binding(set.graphs.size());
    std::map<std::string, std::size_t> type_counts;
    for (std::size_t gi = 0; gi < set.graphs.size(); ++gi) {
        const SignalGraph& g = set.graphs[gi];
        int chosen = -1;
        for (std::size_t si = 0; si < partition.subsets.size(); ++si) {
            if (collector_matches(partition.subsets[si].collector, g)) {
                chosen = static_cast<int>(si);
                break;
            }
        }
        if (chosen < 0) chosen = partition.subset_of(g.signal_type);
        if (chosen < 0) {
            throw SchemaError("signal type '" + g.signal_type +
                              "' is not covered by the partition (entity " + set.entity_id + ")");
        }
        binding[gi] = static_cast<std::size_t>(chosen);
        if (!partition.subsets[binding[gi]].is_collector()) {
            if (++type_counts[g.signal_type + "#" + std::to_string(chosen)] > 1) {
                throw SchemaError("duplicate graphs of signal type '" + g.signal_type +
                                  "' outside a collector subset (entity " + set.entity_id + ")");
            }
        }
    }
    return binding;
}

PartitionReport validate_partition(const SubsetPartition& partition,
                                   const std::map<std::string, FeatureGrouping>& groupings,
                                   const std::vector<std::string>& vocabulary,
                                   const std::map<std::string, std::size_t>& feature_dims) {
    PartitionReport report;
    report.subset_count = partition.subset_count();

    std::map<std::string, int> owner;
    for (std::size_t si = 0; si < partition.subsets.size(); ++si) {
        const Subset& s = partition.subsets[si];
        if (s.signal_types.empty() && !s.is_collector()) {
            throw PartitionError("subset '" + s.name + "' is empty and not a collector");
        }
        for (const std::string& t : s.signal_types) {
            auto [it, inserted] = owner.emplace(t, static_cast<int>(si));
            if (!inserted) {
                throw PartitionError("signal type '" + t + "' appears in subsets '" +
                                     partition.subsets[it->second].name + "' and '" + s.name + "'");
            }
        }
        report.signals_per_subset.push_back(s.signal_types.size());
    }
    for (const std::string& t : vocabulary) {
        if (!owner.count(t)) {
            bool has_any_collector = false;
            for (const Subset& s : partition.subsets) {
                has_any_collector = has_any_collector || s.is_collector();
            }
            if (!has_any_collector) {
                throw PartitionError("signal type '" + t + "' is not assigned to any subset");
            }
        }
    }

    auto grouping_for = [&](const std::string& t) -> FeatureGrouping {
        auto it = groupings.find(t);
        if (it != groupings.end()) return it->second;
        auto dit = feature_dims.find(t);
        const std::size_t d = dit == feature_dims.end() ? 1 : dit->second;
        return FeatureGrouping::singletons(d);
    };

    for (const Subset& s : partition.subsets) {
        if (s.signal_types.empty()) continue;
        const FeatureGrouping ref = grouping_for(s.signal_types.front());
        ref.validate();
        for (const std::string& t : s.signal_types) {
            auto dit = feature_dims.find(t);
            if (dit != feature_dims.end() && dit->second != ref.feature_dim()) {
                throw PartitionError("signal type '" + t + "' has feature width " +
                                     std::to_string(dit->second) + " but subset '" + s.name +
                                     "' expects " + std::to_string(ref.feature_dim()));
            }
            if (!(grouping_for(t) == ref)) {
                throw PartitionError("signal type '" + t +
                                     "' does not share the feature grouping of subset '" + s.name +
                                     "'");
            }
        }
        report.feature_dim_per_subset_name[s.name] = ref.feature_dim();
    }
    return report;
}

FeatureStats compute_feature_stats(const std::vector<GraphSet>& samples,
                                   const std::vector<const GraphSet*>& subset) {
    struct Acc {
        std::vector<double> sum, sumsq;
        std::size_t n = 0;
    };
    std::map<std::string, Acc> accs;
    auto visit = [&](const GraphSet& s) {
        for (const SignalGraph& g : s.graphs) {
            Acc& a = accs[g.signal_type];
            const std::size_t d = g.feature_dim();
            if (a.sum.empty()) {
                a.sum.assign(d, 0.0);
                a.sumsq.assign(d, 0.0);
            }
            for (std::size_t i = 0; i < g.node_count(); ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    const double x = g.node_features(i, j);
                    a.sum[j] += x;
                    a.sumsq[j] += x * x;
                }
                a.n += 1;
            }
        }
    };
    if (!subset.empty()) {
        for (const GraphSet* s : subset) visit(*s);
    } else {
        for (const GraphSet& s : samples) visit(s);
    }

    FeatureStats stats;
    for (auto& [type, a] : accs) {
        FeatureStats::Moments m;
        const double n = static_cast<double>(std::max<std::size_t>(a.n, 1));
        for (std::size_t j = 0; j < a.sum.size(); ++j) {
            const double mean = a.sum[j] / n;
            const double var = std::max(0.0, a.sumsq[j] / n - mean * mean);
            m.mean.push_back(mean);
            m.stddev.push_back(std::sqrt(var));
        }
        stats.per_signal[type] = std::move(m);
    }
    return stats;
}

void normalize_features(GraphSet& set, const FeatureStats& stats) {
    for (SignalGraph& g : set.graphs) {
        auto it = stats.per_signal.find(g.signal_type);
        if (it == stats.per_signal.end()) continue;
        const auto& m = it->second;
        const std::size_t d = std::min<std::size_t>(g.feature_dim(), m.mean.size());
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double x = g.node_features(i, j) - m.mean[j];
                if (m.stddev[j] >= 1e-12) x /= m.stddev[j];
                g.node_features(i, j) = x;
            }
        }
    }
}

void normalize_features(Dataset& dataset, const FeatureStats& stats) {
    for (GraphSet& s : dataset.samples) normalize_features(s, stats);
}

} // namespace superman
