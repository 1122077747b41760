#include "superman/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "superman/adam.hpp"
#include "superman/metrics.hpp"

namespace superman {

void TrainConfig::validate() const {
    if (epochs < 1) throw InvalidConfig("epochs must be at least 1");
    if (batch_size != 16 && batch_size != 32) throw InvalidConfig("batch_size must be 16 or 32");
    if (lr_max < 1e-4 || lr_max > 1e-2) throw InvalidConfig("lr_max must lie in [1e-4, 1e-2]");
    if (lr_min < 1e-8 || lr_min > 1e-7) throw InvalidConfig("lr_min must lie in [1e-8, 1e-7]");
    if (plateau_factor < 0.2 || plateau_factor > 0.9) {
        throw InvalidConfig("plateau_factor must lie in [0.2, 0.9]");
    }
    if (dropout != 0.1 && dropout != 0.2) throw InvalidConfig("dropout must be 0.1 or 0.2");
    if (hidden != 32 && hidden != 64) throw InvalidConfig("hidden must be 32 or 64");
    if (layers < 3 || layers > 5) throw InvalidConfig("layers must lie in {3,4,5}");
}

SplitIndices split_dataset(std::size_t n_samples, double train_frac, double val_frac,
                           std::uint64_t seed) {
    if (train_frac < 0.0 || val_frac < 0.0 || train_frac + val_frac > 1.0) {
        throw InvalidConfig("split fractions must be nonnegative and sum to at most 1");
    }
    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(seed, 0x73706c69));
    rng.shuffle(order);
    SplitIndices split;
    const std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n_samples));
    const std::size_t n_val =
        static_cast<std::size_t>(val_frac * static_cast<double>(n_samples));
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (i < n_train) {
            split.train.push_back(order[i]);
        } else if (i < n_train + n_val) {
            split.val.push_back(order[i]);
        } else {
            split.test.push_back(order[i]);
        }
    }
    return split;
}

std::vector<std::vector<std::size_t>> minority_upsample(const std::vector<int>& labels,
                                                        std::size_t batch_size, Rng& rng) {
    if (batch_size < 2) throw InvalidConfig("batch_size must be at least 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == 1 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        throw ConfigError("minority upsampling requires both classes present");
    }
    std::vector<std::size_t>& majority = pos.size() >= neg.size() ? pos : neg;
    std::vector<std::size_t>& minority = pos.size() >= neg.size() ? neg : pos;

    rng.shuffle(majority);
    const std::size_t major_per_batch = batch_size - batch_size / 2;
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < majority.size(); start += major_per_batch) {
        const std::size_t take = std::min(major_per_batch, majority.size() - start);
        std::vector<std::size_t> batch(majority.begin() + static_cast<std::ptrdiff_t>(start),
                                       majority.begin() + static_cast<std::ptrdiff_t>(start + take));
        for (std::size_t k = 0; k < take && batch.size() < take + batch_size / 2; ++k) {
            batch.push_back(minority[rng.index(minority.size())]);
        }
        rng.shuffle(batch);
        batches.push_back(std::move(batch));
    }
    return batches;
}

std::vector<std::vector<std::size_t>> shuffled_batches(std::size_t n, std::size_t batch_size,
                                                       Rng& rng) {
    if (batch_size < 1) throw InvalidConfig("batch_size must be positive");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t take = std::min(batch_size, n - start);
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(start + take));
    }
    return batches;
}

bool PlateauScheduler::observe(double val_loss) {
    if (val_loss < best_) {
        best_ = val_loss;
        bad_ = 0;
        return false;
    }
    if (++bad_ >= patience) {
        lr = std::max(lr * factor, lr_min);
        bad_ = 0;
        return true;
    }
    return false;
}

std::string history_to_csv(const std::vector<HistoryRow>& history) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,train_loss,val_loss,val_auprc,lr\n";
    for (const HistoryRow& r : history) {
        out << r.epoch << ',' << r.train_loss << ',' << r.val_loss << ',' << r.val_auprc << ','
            << r.lr << '\n';
    }
    return out.str();
}

namespace {

std::vector<const GraphSet*> gather(const Dataset& dataset,
                                    const std::vector<std::size_t>& indices) {
    std::vector<const GraphSet*> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(&dataset.samples[i]);
    return out;
}

std::vector<int> gather_labels(const Dataset& dataset, const std::vector<std::size_t>& indices) {
    std::vector<int> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(dataset.samples[i].label);
    return out;
}

} // namespace

TrainResult train(const SupermanModel& initial, const Dataset& dataset,
                  const SplitIndices& split, const TrainConfig& config) {
    TrainResult result;
    result.model = initial;
    if (config.epochs == 0) return result;
    if (split.train.empty() || split.val.empty()) {
        throw InvalidConfig("training requires nonempty train and validation splits");
    }

    SupermanModel model = initial;
    ParamRegistry registry;
    model.collect_params(registry);
    AdamState opt = AdamState::init(registry, config.lr_max, config.weight_decay);

    const std::vector<int> train_labels = gather_labels(dataset, split.train);
    const std::vector<const GraphSet*> val_samples = gather(dataset, split.val);
    const std::vector<int> val_labels = gather_labels(dataset, split.val);

    PlateauScheduler scheduler;
    scheduler.lr = config.lr_max;
    scheduler.factor = config.plateau_factor;
    scheduler.lr_min = config.lr_min;
    scheduler.patience = config.plateau_patience;
    result.best_val_auprc = -1.0;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        Rng epoch_rng(mix_seed(config.seed, 0x65706f63, epoch));
        std::vector<std::vector<std::size_t>> batches =
            config.upsample_minority
                ? minority_upsample(train_labels, config.batch_size, epoch_rng)
                : shuffled_batches(split.train.size(), config.batch_size, epoch_rng);

        double epoch_loss = 0.0;
        std::size_t epoch_batches = 0;
        double val_loss = 0.0;
        double val_auprc = 0.0;
        try {
            for (const std::vector<std::size_t>& batch_local : batches) {
                std::vector<const GraphSet*> batch;
                batch.reserve(batch_local.size());
                for (std::size_t k : batch_local) {
                    batch.push_back(&dataset.samples[split.train[k]]);
                }
                Tape tape;
                ModelVars vars = bind_model(tape, model);
                const std::size_t n_params = registry.count();
                Rng dropout_rng = epoch_rng.split(epoch_batches);
                Var loss = tape_batch_loss(tape, vars, batch, true, &dropout_rng);
                const double loss_value = tape.value(loss).item();
                if (!std::isfinite(loss_value)) {
                    throw NumericalError("non-finite training loss");
                }
                tape.backward(loss);
                std::vector<Tensor> grads;
                grads.reserve(n_params);
                // bind_model ran on a fresh tape, so parameters occupy the
                // first n_params nodes in registry order.
                for (std::size_t p = 0; p < n_params; ++p) {
                    grads.push_back(tape.grad(Var{static_cast<int>(p)}));
                }
                adam_step(opt, registry, grads);
                epoch_loss += loss_value;
                ++epoch_batches;
            }
            const std::vector<double> val_logits = predict_logits(model, val_samples);
            val_loss = bce_loss(val_logits, val_labels);
            val_auprc = auprc(val_logits, val_labels);
        } catch (const NumericalError& e) {
            result.diverged = true;
            result.divergence_reason = e.what();
            return result;
        }

        HistoryRow row;
        row.epoch = epoch;
        row.train_loss = epoch_batches > 0 ? epoch_loss / static_cast<double>(epoch_batches) : 0.0;
        row.val_loss = val_loss;
        row.val_auprc = val_auprc;
        row.lr = opt.learning_rate;
        result.history.push_back(row);

        if (val_auprc > result.best_val_auprc) {
            result.best_val_auprc = val_auprc;
            result.best_epoch = epoch;
            result.model = model;
        }

        scheduler.observe(val_loss);
        opt.learning_rate = scheduler.lr;
    }
    return result;
}

EvalReport evaluate(const SupermanModel& model, const Dataset& dataset,
                    const std::vector<std::size_t>& indices) {
    const std::vector<const GraphSet*> samples = gather(dataset, indices);
    const std::vector<int> labels = gather_labels(dataset, indices);
    const std::vector<double> logits = predict_logits(model, samples);
    std::vector<double> probs(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) probs[i] = stable_sigmoid(logits[i]);
    EvalReport report;
    report.auprc = auprc(probs, labels);
    report.auroc = auroc(probs, labels);
    report.accuracy = accuracy(probs, labels);
    report.ece = ece(probs, labels);
    report.loss = bce_loss(logits, labels);
    return report;
}

} // namespace superman
