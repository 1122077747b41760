#include "doctest.h"

#include <map>
#include <set>

#include "superman/synth.hpp"

using namespace superman;

TEST_CASE("feature xor truth table") {
    const Dataset ds = feature_xor_dataset(1);
    REQUIRE(ds.samples.size() == 4);
    std::map<std::pair<int, int>, int> table;
    for (const GraphSet& s : ds.samples) {
        REQUIRE(s.graphs.size() == 1);
        const auto& f = s.graphs[0].node_features;
        table[{static_cast<int>(f(0, 0)), static_cast<int>(f(0, 1))}] = s.label;
    }
    CHECK(table[{0, 0}] == 0);
    CHECK(table[{0, 1}] == 1);
    CHECK(table[{1, 0}] == 1);
    CHECK(table[{1, 1}] == 0);
}

TEST_CASE("feature xor replication count") {
    CHECK(feature_xor_dataset(5).samples.size() == 20);
}

TEST_CASE("set xor rows and permutation stability") {
    const Dataset ds = set_xor_dataset(2);
    REQUIRE(ds.samples.size() == 8);
    for (const GraphSet& s : ds.samples) {
        REQUIRE(s.graphs.size() == 2);
        int x1 = -1, x2 = -1;
        for (const SignalGraph& g : s.graphs) {
            if (g.signal_type == "A") x1 = static_cast<int>(g.node_features(0, 0));
            if (g.signal_type == "B") x2 = static_cast<int>(g.node_features(0, 0));
        }
        CHECK(s.label == (x1 ^ x2));
        GraphSet swapped = s;
        std::swap(swapped.graphs[0], swapped.graphs[1]);
        canonicalize(swapped);
        CHECK(swapped == s);
    }
}

TEST_CASE("irregular generator is deterministic per seed") {
    IrregularSignalSpec spec;
    spec.n_entities = 50;
    spec.seed = 9;
    IrregularSignalMeta a, b;
    const Dataset da = irregular_signal_dataset(spec, &a);
    const Dataset db = irregular_signal_dataset(spec, &b);
    CHECK(a.content_hash == b.content_hash);
    CHECK(da == db);
    spec.seed = 10;
    IrregularSignalMeta c;
    (void)irregular_signal_dataset(spec, &c);
    CHECK(a.content_hash != c.content_hash);
}

TEST_CASE("irregular entities carry three to six signal types") {
    IrregularSignalSpec spec;
    spec.n_entities = 200;
    spec.seed = 4;
    const Dataset ds = irregular_signal_dataset(spec);
    for (const GraphSet& s : ds.samples) {
        std::set<std::string> types;
        for (const SignalGraph& g : s.graphs) types.insert(g.signal_type);
        CHECK(types.size() == s.graphs.size());
        CHECK(types.size() >= 3);
        CHECK(types.size() <= 6);
        CHECK(types.count("trend") == 1);
        CHECK(types.count("gaps") == 1);
    }
}

TEST_CASE("labels ignore timestamps when the gap effect is off") {
    IrregularSignalSpec spec;
    spec.n_entities = 120;
    spec.seed = 31;
    spec.gap_coeff = 0.0;
    const Dataset a = irregular_signal_dataset(spec);
    // Stretch every cadence: same draws, different timestamps.
    spec.fast_gap_mean *= 7.0;
    spec.slow_gap_mean *= 0.25;
    const Dataset b = irregular_signal_dataset(spec);
    REQUIRE(a.samples.size() == b.samples.size());
    bool any_timestamp_differs = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].label == b.samples[i].label);
        if (!(a.samples[i] == b.samples[i])) any_timestamp_differs = true;
    }
    CHECK(any_timestamp_differs);
}

TEST_CASE("label balance stays near even over many samples") {
    IrregularSignalSpec spec;
    spec.n_entities = 10000;
    spec.seed = 77;
    IrregularSignalMeta meta;
    (void)irregular_signal_dataset(spec, &meta);
    CHECK(meta.positive_rate > 0.48);
    CHECK(meta.positive_rate < 0.52);
}

TEST_CASE("published rule has a nontrivial bayes ceiling") {
    IrregularSignalSpec spec;
    spec.n_entities = 2000;
    spec.seed = 13;
    IrregularSignalMeta meta;
    (void)irregular_signal_dataset(spec, &meta);
    CHECK(meta.bayes_accuracy > 0.8);
    CHECK(meta.bayes_accuracy <= 1.0);
    CHECK(!meta.rule.empty());
}
