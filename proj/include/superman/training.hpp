#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "superman/model.hpp"
#include "superman/rng.hpp"
#include "superman/signal_graph.hpp"

namespace superman {

// Hyperparameter grid bounds. validate() enforces the grid; library callers
// may run outside it (e.g. epochs = 0 returns the initial model untouched).
struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double lr_max = 1e-3;
    double lr_min = 1e-7;
    double plateau_factor = 0.5;
    std::size_t plateau_patience = 100;
    double weight_decay = 1e-5;
    double dropout = 0.1;
    std::size_t hidden = 32;
    std::size_t layers = 3;
    std::uint64_t seed = 0;
    bool upsample_minority = false;

    void validate() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

// Deterministic shuffled split by fractions (test takes the remainder).
SplitIndices split_dataset(std::size_t n_samples, double train_frac, double val_frac,
                           std::uint64_t seed);

// Class-balanced batches: the majority class is partitioned without
// replacement, the minority is resampled with replacement to match, so every
// batch is within one sample of 50/50.
std::vector<std::vector<std::size_t>> minority_upsample(const std::vector<int>& labels,
                                                        std::size_t batch_size, Rng& rng);

// Plain shuffled batches.
std::vector<std::vector<std::size_t>> shuffled_batches(std::size_t n, std::size_t batch_size,
                                                       Rng& rng);

// Multiplies the rate by factor after `patience` observations without
// strict improvement, floored at lr_min; the counter resets on both
// improvement and reduction.
struct PlateauScheduler {
    double lr = 1e-3;
    double factor = 0.5;
    double lr_min = 1e-7;
    std::size_t patience = 100;

    // Returns true when this observation triggered a reduction.
    bool observe(double val_loss);

private:
    double best_ = std::numeric_limits<double>::infinity();
    std::size_t bad_ = 0;
};

struct HistoryRow {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_auprc = 0.0;
    double lr = 0.0;
};

std::string history_to_csv(const std::vector<HistoryRow>& history);

struct TrainResult {
    SupermanModel model; // best validation-AUPRC checkpoint
    std::vector<HistoryRow> history;
    bool diverged = false;
    std::string divergence_reason;
    std::size_t best_epoch = 0;
    double best_val_auprc = 0.0;
};

// Adam with decoupled weight decay, epoch-level plateau LR scheduling on the
// validation loss, and best-validation-AUPRC model selection. A non-finite
// loss stops training and returns the best checkpoint so far with the
// diverged flag set.
TrainResult train(const SupermanModel& initial, const Dataset& dataset,
                  const SplitIndices& split, const TrainConfig& config);

struct EvalReport {
    double auprc = 0.0;
    double auroc = 0.0;
    double accuracy = 0.0;
    double ece = 0.0;
    double loss = 0.0;
};

EvalReport evaluate(const SupermanModel& model, const Dataset& dataset,
                    const std::vector<std::size_t>& indices);

} // namespace superman
