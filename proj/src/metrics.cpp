#include "superman/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "superman/errors.hpp"

namespace superman {

namespace {

void check_binary(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw InvalidShape("scores and labels must be nonempty and equally sized");
    }
    for (int y : labels) {
        if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    }
}

std::size_t positive_count(const std::vector<int>& labels) {
    std::size_t p = 0;
    for (int y : labels) p += static_cast<std::size_t>(y);
    return p;
}

} // namespace

double auprc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_binary(scores, labels);
    const std::size_t pos = positive_count(labels);
    if (pos == 0 || pos == labels.size()) {
        throw MetricUndefined("auprc needs both classes present");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double area = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0;
    std::size_t seen = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Consume the whole tie group before measuring precision/recall.
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            tp += static_cast<std::size_t>(labels[order[j]]);
            ++seen;
            ++j;
        }
        const double precision = static_cast<double>(tp) / static_cast<double>(seen);
        const double recall = static_cast<double>(tp) / static_cast<double>(pos);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return area;
}

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_binary(scores, labels);
    const std::size_t pos = positive_count(labels);
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) throw MetricUndefined("auroc needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of average ranks over positives (Mann-Whitney U).
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::size_t tie_pos = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            tie_pos += static_cast<std::size_t>(labels[order[j]]);
            ++j;
        }
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // ranks are 1-based
        rank_sum += avg_rank * static_cast<double>(tie_pos);
        i = j;
    }
    const double u = rank_sum - 0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1);
    return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double accuracy(const std::vector<double>& scores, const std::vector<int>& labels,
                double threshold) {
    check_binary(scores, labels);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const int pred = scores[i] > threshold ? 1 : 0;
        hits += static_cast<std::size_t>(pred == labels[i]);
    }
    return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double bce_loss(const std::vector<double>& logits, const std::vector<int>& labels) {
    if (logits.size() != labels.size() || logits.empty()) {
        throw InvalidShape("logits and labels must be nonempty and equally sized");
    }
    auto softplus = [](double x) {
        return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    };
    double acc = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double y = static_cast<double>(labels[i]);
        acc += y * softplus(-logits[i]) + (1.0 - y) * softplus(logits[i]);
    }
    return acc / static_cast<double>(logits.size());
}

std::vector<ReliabilityBin> reliability_diagram(const std::vector<double>& probs,
                                                const std::vector<int>& labels,
                                                std::size_t n_bins) {
    check_binary(probs, labels);
    if (n_bins == 0) throw InvalidConfig("n_bins must be positive");
    std::vector<ReliabilityBin> bins(n_bins);
    std::vector<double> conf_sum(n_bins, 0.0), acc_sum(n_bins, 0.0);
    for (std::size_t b = 0; b < n_bins; ++b) {
        bins[b].bin_center = (static_cast<double>(b) + 0.5) / static_cast<double>(n_bins);
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0 || probs[i] > 1.0) throw DataError("probabilities must lie in [0,1]");
        std::size_t b = static_cast<std::size_t>(probs[i] * static_cast<double>(n_bins));
        if (b >= n_bins) b = n_bins - 1;
        conf_sum[b] += probs[i];
        acc_sum[b] += static_cast<double>(labels[i]);
        bins[b].count += 1;
    }
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (bins[b].count > 0) {
            bins[b].confidence = conf_sum[b] / static_cast<double>(bins[b].count);
            bins[b].accuracy = acc_sum[b] / static_cast<double>(bins[b].count);
        }
    }
    return bins;
}

double ece(const std::vector<double>& probs, const std::vector<int>& labels, std::size_t n_bins) {
    const std::vector<ReliabilityBin> bins = reliability_diagram(probs, labels, n_bins);
    const double n = static_cast<double>(probs.size());
    double total = 0.0;
    for (const ReliabilityBin& b : bins) {
        if (b.count == 0) continue;
        total += (static_cast<double>(b.count) / n) * std::fabs(b.accuracy - b.confidence);
    }
    return total;
}

} // namespace superman
