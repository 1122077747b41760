#include "superman/mlp.hpp"

#include <cmath>

#include "superman/kernels.hpp"

#include "nlohmann/json.hpp"

namespace superman {

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    if (s == "identity") return Activation::identity;
    throw InvalidConfig("unknown activation: " + s);
}

OutputActivation output_activation_from_string(const std::string& s) {
    if (s == "identity") return OutputActivation::identity;
    if (s == "sigmoid") return OutputActivation::sigmoid;
    throw InvalidConfig("unknown output activation: " + s);
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
        case Activation::identity: return "identity";
    }
    return "identity";
}

std::string to_string(OutputActivation a) {
    return a == OutputActivation::sigmoid ? "sigmoid" : "identity";
}

Mlp Mlp::make(std::vector<std::size_t> dims, Activation act, OutputActivation out_act,
              double dropout) {
    if (dims.size() < 2) throw InvalidConfig("an Mlp needs at least input and output dims");
    Mlp net;
    net.layer_dims = std::move(dims);
    net.activation = act;
    net.output_activation = out_act;
    net.dropout_rate = dropout;
    for (std::size_t l = 0; l + 1 < net.layer_dims.size(); ++l) {
        net.weights.emplace_back(Tensor({net.layer_dims[l], net.layer_dims[l + 1]}));
        net.biases.emplace_back(Tensor({net.layer_dims[l + 1]}));
    }
    net.validate();
    return net;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

void Mlp::validate() const {
    if (layer_dims.size() < 2) throw InvalidConfig("layer_dims too short");
    if (weights.size() + 1 != layer_dims.size() || biases.size() != weights.size()) {
        throw InvalidShape("layer count does not match layer_dims");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].shape() != std::vector<std::size_t>{layer_dims[l], layer_dims[l + 1]}) {
            throw InvalidShape("weight shape mismatch at layer " + std::to_string(l));
        }
        if (biases[l].shape() != std::vector<std::size_t>{layer_dims[l + 1]}) {
            throw InvalidShape("bias shape mismatch at layer " + std::to_string(l));
        }
    }
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw InvalidConfig("dropout_rate must lie in [0,1)");
    }
}

void init_params(Mlp& net, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6d6c70 /* "mlp" */));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const double fan_in = static_cast<double>(net.layer_dims[l]);
        const double fan_out = static_cast<double>(net.layer_dims[l + 1]);
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& w : net.weights[l].values()) w = rng.uniform(-bound, bound);
        net.biases[l].fill(0.0);
    }
}

void apply_activation(Activation a, Tensor& t) {
    switch (a) {
        case Activation::relu:
            for (double& x : t.values()) x = x > 0.0 ? x : 0.0;
            break;
        case Activation::tanh:
            for (double& x : t.values()) x = std::tanh(x);
            break;
        case Activation::identity:
            break;
    }
}

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void apply_output_activation(OutputActivation a, Tensor& t) {
    if (a == OutputActivation::sigmoid) {
        for (double& x : t.values()) x = stable_sigmoid(x);
    }
}

Tensor dropout_mask(const std::vector<std::size_t>& shape, double p, Rng& rng) {
    Tensor mask = Tensor::full(shape, 1.0);
    if (p <= 0.0) return mask;
    const double keep_scale = 1.0 / (1.0 - p);
    for (double& m : mask.values()) m = rng.uniform() < p ? 0.0 : keep_scale;
    return mask;
}

Tensor mlp_forward(const Mlp& net, const Tensor& input, bool training, Rng* rng) {
    net.validate();
    Tensor x = input.dim() == 1 ? input.reshaped({1, input.size()}) : input;
    if (x.dim() != 2 || x.cols() != net.input_dim()) {
        throw InvalidShape("mlp_forward input width " +
                           std::to_string(input.dim() == 1 ? input.size() : input.cols()) +
                           " does not match layer_dims[0]=" + std::to_string(net.input_dim()));
    }
    if (training && net.dropout_rate > 0.0 && rng == nullptr) {
        throw InvalidConfig("training-mode dropout requires an rng");
    }
    const std::size_t layers = net.layer_count();
    for (std::size_t l = 0; l < layers; ++l) {
        Tensor y = kernels::matmul(x, net.weights[l]);
        const Tensor& b = net.biases[l];
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += b[j];
        }
        const bool is_last = (l + 1 == layers);
        if (!is_last) {
            apply_activation(net.activation, y);
            if (training && net.dropout_rate > 0.0) {
                Tensor mask = dropout_mask(y.shape(), net.dropout_rate, *rng);
                for (std::size_t i = 0; i < y.size(); ++i) y[i] *= mask[i];
            }
        } else {
            apply_output_activation(net.output_activation, y);
        }
        x = std::move(y);
    }
    if (input.dim() == 1) x = x.reshaped({x.size()});
    ensure_finite(x, "mlp_forward output");
    return x;
}

nlohmann::json mlp_to_json(const Mlp& net) {
    nlohmann::json j;
    j["layer_dims"] = net.layer_dims;
    j["activation"] = to_string(net.activation);
    j["output_activation"] = to_string(net.output_activation);
    j["dropout_rate"] = net.dropout_rate;
    j["weights"] = nlohmann::json::array();
    j["biases"] = nlohmann::json::array();
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        j["weights"].push_back(net.weights[l].values());
        j["biases"].push_back(net.biases[l].values());
    }
    return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
    Mlp net = Mlp::make(j.at("layer_dims").get<std::vector<std::size_t>>(),
                        activation_from_string(j.at("activation").get<std::string>()),
                        output_activation_from_string(j.at("output_activation").get<std::string>()),
                        j.value("dropout_rate", 0.0));
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    if (ws.size() != net.weights.size() || bs.size() != net.biases.size()) {
        throw SchemaError("checkpoint layer count does not match layer_dims");
    }
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        auto wv = ws[l].get<std::vector<double>>();
        auto bv = bs[l].get<std::vector<double>>();
        if (wv.size() != net.weights[l].size() || bv.size() != net.biases[l].size()) {
            throw SchemaError("checkpoint tensor size mismatch at layer " + std::to_string(l));
        }
        net.weights[l].values() = std::move(wv);
        net.biases[l].values() = std::move(bv);
    }
    return net;
}

} // namespace superman
