#pragma once

#include <cstdint>
#include <vector>

#include "superman/tape.hpp"
#include "superman/tensor.hpp"

namespace superman {

// Adam with decoupled weight decay. Moment tensors mirror parameter shapes;
// the step counter starts at 0 and increments on every step.
struct AdamState {
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    std::uint64_t step = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;

    static AdamState init(const ParamRegistry& params, double learning_rate,
                          double weight_decay = 0.0);
};

// In-place update of every registered parameter:
//   p -= lr * mhat / (sqrt(vhat) + eps) + lr * weight_decay * p
// with the usual bias-corrected first and second moments.
void adam_step(AdamState& state, const ParamRegistry& params, const std::vector<Tensor>& grads);

} // namespace superman
