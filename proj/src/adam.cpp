#include "superman/adam.hpp"

#include <cmath>

namespace superman {

AdamState AdamState::init(const ParamRegistry& params, double learning_rate,
                          double weight_decay) {
    AdamState s;
    s.learning_rate = learning_rate;
    s.weight_decay = weight_decay;
    s.m.reserve(params.count());
    s.v.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        s.m.emplace_back(Tensor(params.tensor(i).shape()));
        s.v.emplace_back(Tensor(params.tensor(i).shape()));
    }
    return s;
}

void adam_step(AdamState& state, const ParamRegistry& params, const std::vector<Tensor>& grads) {
    if (grads.size() != params.count() || state.m.size() != params.count()) {
        throw InvalidShape("adam_step: parameter/gradient/state count mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.count(); ++i) {
        Tensor& p = params.tensor(i);
        const Tensor& g = grads[i];
        if (!p.same_shape(g) || !p.same_shape(state.m[i])) {
            throw InvalidShape("adam_step: shape mismatch for " + params.name(i));
        }
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
            v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            p[k] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon) +
                    state.learning_rate * state.weight_decay * p[k];
        }
        ensure_finite(p, "adam_step parameter " + params.name(i));
    }
}

} // namespace superman
