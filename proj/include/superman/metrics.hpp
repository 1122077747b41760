#pragma once

#include <cstddef>
#include <vector>

namespace superman {

// Area under the precision-recall curve with step-wise interpolation: tied
// scores collapse into one threshold, and each recall increment is weighted
// by the precision at that threshold.
double auprc(const std::vector<double>& scores, const std::vector<int>& labels);

// Rank statistic equivalent of the trapezoidal ROC area; ties count half.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

double accuracy(const std::vector<double>& scores, const std::vector<int>& labels,
                double threshold = 0.5);

// Mean binary cross-entropy from logits, safe against overflow.
double bce_loss(const std::vector<double>& logits, const std::vector<int>& labels);

// Expected calibration error over equal-width probability bins.
double ece(const std::vector<double>& probs, const std::vector<int>& labels,
           std::size_t n_bins = 10);

struct ReliabilityBin {
    double bin_center = 0.0;
    double confidence = 0.0;
    double accuracy = 0.0;
    std::size_t count = 0;
};

std::vector<ReliabilityBin> reliability_diagram(const std::vector<double>& probs,
                                                const std::vector<int>& labels,
                                                std::size_t n_bins = 10);

} // namespace superman
