#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "superman/metrics.hpp"
#include "superman/errors.hpp"
#include "superman/rng.hpp"

using namespace superman;

namespace {

// Exhaustive threshold-enumeration oracle: walks every distinct score as a
// cutoff, recounting precision and recall from scratch each time.
double auprc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<double> thresholds = scores;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    std::size_t pos = 0;
    for (int y : labels) pos += static_cast<std::size_t>(y);

    double area = 0.0;
    double prev_recall = 0.0;
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

// Pairwise comparison oracle with half credit for ties.
double auroc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

// Straightforward clamped cross-entropy.
double bce_oracle(const std::vector<double>& logits, const std::vector<int>& labels) {
    double acc = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        double p = 1.0 / (1.0 + std::exp(-logits[i]));
        p = std::min(std::max(p, 1e-300), 1.0 - 1e-16);
        acc += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return acc / static_cast<double>(logits.size());
}

} // namespace

TEST_CASE("perfect ranking scores 1.0 on both curve metrics") {
    const std::vector<double> scores = {0.9, 0.8, 0.7, 0.2, 0.1};
    const std::vector<int> labels = {1, 1, 1, 0, 0};
    CHECK(auprc(scores, labels) == 1.0);
    CHECK(auroc(scores, labels) == 1.0);
}

TEST_CASE("inverted ranking on a balanced set gives zero auroc") {
    const std::vector<double> scores = {0.1, 0.2, 0.8, 0.9};
    const std::vector<int> labels = {1, 1, 0, 0};
    CHECK(auroc(scores, labels) == 0.0);
}

TEST_CASE("six-sample mixed case matches the threshold oracle") {
    const std::vector<double> scores = {0.9, 0.7, 0.7, 0.5, 0.3, 0.1};
    const std::vector<int> labels = {1, 0, 1, 1, 0, 0};
    CHECK(auprc(scores, labels) == doctest::Approx(auprc_oracle(scores, labels)).epsilon(1e-12));
    CHECK(auroc(scores, labels) == doctest::Approx(auroc_oracle(scores, labels)).epsilon(1e-12));
}

TEST_CASE("random cases match the oracles exactly") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng.index(17);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse grid makes ties common.
            scores[i] = std::round(rng.uniform() * 8.0) / 8.0;
            labels[i] = rng.bernoulli(0.4) ? 1 : 0;
            has0 = has0 || labels[i] == 0;
            has1 = has1 || labels[i] == 1;
        }
        if (!has0) labels[0] = 0;
        if (!has1) labels[n - 1] = 1;
        CHECK(std::fabs(auprc(scores, labels) - auprc_oracle(scores, labels)) < 1e-12);
        CHECK(std::fabs(auroc(scores, labels) - auroc_oracle(scores, labels)) < 1e-12);
    }
}

TEST_CASE("rank metrics are invariant to monotone transforms") {
    Rng rng(5);
    std::vector<double> scores(40);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < 40; ++i) {
        scores[i] = rng.normal();
        labels[i] = rng.bernoulli(0.5) ? 1 : 0;
    }
    labels[0] = 0;
    labels[1] = 1;
    std::vector<double> warped(40);
    for (std::size_t i = 0; i < 40; ++i) warped[i] = std::exp(0.7 * scores[i]) + 3.0;
    CHECK(auprc(scores, labels) == doctest::Approx(auprc(warped, labels)).epsilon(1e-12));
    CHECK(auroc(scores, labels) == doctest::Approx(auroc(warped, labels)).epsilon(1e-12));
}

TEST_CASE("single-class input is undefined for the curve metrics") {
    CHECK_THROWS_AS(auprc({0.5, 0.6}, {1, 1}), MetricUndefined);
    CHECK_THROWS_AS(auroc({0.5, 0.6}, {0, 0}), MetricUndefined);
}

TEST_CASE("bce at logit zero is ln 2") {
    CHECK(bce_loss({0.0}, {1}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("bce stays finite for extreme logits") {
    const double loss = bce_loss({50.0}, {1});
    CHECK(loss < 1e-20);
    CHECK(std::isfinite(bce_loss({-50.0}, {1})));
    CHECK(bce_loss({-50.0}, {1}) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("bce matches the clamped oracle on random batches") {
    Rng rng(7);
    std::vector<double> logits(64);
    std::vector<int> labels(64);
    for (std::size_t i = 0; i < 64; ++i) {
        logits[i] = rng.normal(0.0, 3.0);
        labels[i] = rng.bernoulli(0.5) ? 1 : 0;
    }
    CHECK(bce_loss(logits, labels) == doctest::Approx(bce_oracle(logits, labels)).epsilon(1e-9));
}

TEST_CASE("accuracy with the default threshold") {
    CHECK(accuracy({0.9, 0.4, 0.6, 0.2}, {1, 0, 0, 0}) == 0.75);
    // Exactly 0.5 is not a positive call.
    CHECK(accuracy({0.5}, {0}) == 1.0);
}

TEST_CASE("ece is zero for perfectly calibrated degenerate predictions") {
    CHECK(ece({0.0, 1.0, 1.0, 0.0}, {0, 1, 1, 0}) == 0.0);
}

TEST_CASE("ece is zero when confidence matches the base rate in one bin") {
    CHECK(ece({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == 0.0);
}

TEST_CASE("ece matches a hand-binned computation") {
    // Four samples in four distinct bins: |1-0.9| + |0-0.8| + |1-0.3| + |0-0.1|
    // averaged with weight 1/4 each.
    const double expected = (0.1 + 0.8 + 0.7 + 0.1) / 4.0;
    CHECK(ece({0.9, 0.8, 0.3, 0.1}, {1, 0, 1, 0}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("reliability diagram reports bin occupancy") {
    const auto bins = reliability_diagram({0.05, 0.95, 0.92}, {0, 1, 1}, 10);
    CHECK(bins.size() == 10);
    CHECK(bins[0].count == 1);
    CHECK(bins[9].count == 2);
    CHECK(bins[9].accuracy == 1.0);
    CHECK(bins[9].confidence == doctest::Approx((0.95 + 0.92) / 2));
    CHECK(bins[5].count == 0);
    CHECK(bins[0].bin_center == doctest::Approx(0.05));
}

TEST_CASE("probabilities outside the unit interval are rejected") {
    CHECK_THROWS_AS(ece({1.5}, {1}), DataError);
}
