#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "superman/rng.hpp"
#include "superman/tensor.hpp"

#include "nlohmann/json_fwd.hpp"

namespace superman {

enum class Activation { relu, tanh, identity };
enum class OutputActivation { identity, sigmoid };

Activation activation_from_string(const std::string& s);
OutputActivation output_activation_from_string(const std::string& s);
std::string to_string(Activation a);
std::string to_string(OutputActivation a);

// Fully connected net. weights[l] has shape [layer_dims[l], layer_dims[l+1]]
// so a batch input of shape [B, d_in] flows left to right. The hidden
// activation applies to every layer except the last; dropout applies to
// hidden activations in training mode only (inverted scaling, so evaluation
// needs no rescale).
struct Mlp {
    std::vector<std::size_t> layer_dims;
    std::vector<Tensor> weights;
    std::vector<Tensor> biases;
    Activation activation = Activation::relu;
    OutputActivation output_activation = OutputActivation::identity;
    double dropout_rate = 0.0;

    static Mlp make(std::vector<std::size_t> dims, Activation act = Activation::relu,
                    OutputActivation out_act = OutputActivation::identity,
                    double dropout = 0.0);

    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
    std::size_t layer_count() const { return weights.size(); }
    std::size_t parameter_count() const;

    void validate() const;

    template <typename Fn>
    void visit_params(const std::string& prefix, Fn&& fn) {
        for (std::size_t l = 0; l < weights.size(); ++l) {
            fn(prefix + ".w" + std::to_string(l), weights[l]);
            fn(prefix + ".b" + std::to_string(l), biases[l]);
        }
    }
};

// Glorot-uniform weights, zero biases, reproducible per seed.
void init_params(Mlp& net, std::uint64_t seed);

void apply_activation(Activation a, Tensor& t);
void apply_output_activation(OutputActivation a, Tensor& t);

// Overflow-safe logistic function; exact 0/1 in the saturated tails.
double stable_sigmoid(double x);

// Draws a row-major inverted-dropout mask (entries 0 or 1/(1-p)).
Tensor dropout_mask(const std::vector<std::size_t>& shape, double p, Rng& rng);

// Forward pass on a [B, d_in] batch (or [d_in] vector, treated as one row).
// Training mode applies dropout and requires an rng.
Tensor mlp_forward(const Mlp& net, const Tensor& input, bool training = false,
                   Rng* rng = nullptr);

nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

} // namespace superman
