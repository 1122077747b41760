#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "superman/mlp.hpp"
#include "superman/rng.hpp"
#include "superman/tensor.hpp"

namespace superman {

// Handle into a Tape. Only valid for the tape that produced it.
struct Var {
    int index = -1;
    bool valid() const noexcept { return index >= 0; }
};

// Reverse-mode tape over dense tensors. Nodes are appended in evaluation
// order, so reverse creation order is a valid reverse-topological sweep.
// Gradients flow only through nodes flagged as requiring them; a parameter
// never touched by the objective keeps an exactly-zero gradient.
class Tape {
public:
    explicit Tape(bool recording = true) : recording_(recording) {}

    bool recording() const noexcept { return recording_; }

    Var constant(Tensor value);
    Var param(Tensor value);

    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var scale(Var a, double c);
    Var matmul(Var a, Var b, bool trans_a = false, bool trans_b = false);
    // m: [r,c], bias: [c]; adds the bias to every row.
    Var add_row_vec(Var m, Var bias);
    Var relu(Var a);
    Var tanh(Var a);
    Var sigmoid(Var a);
    Var sum_all(Var a);
    Var mean_all(Var a);
    // [r,c] -> [r]; entry i is the left-to-right sum of row i.
    Var row_sums(Var a);
    Var reshape(Var a, std::vector<std::size_t> shape);
    Var slice_cols(Var a, std::vector<std::size_t> cols);
    Var concat_cols(const std::vector<Var>& parts);
    Var dropout(Var a, double p, Rng& rng);
    // Mean binary cross-entropy from raw logits; labels are 0/1 constants.
    Var bce_with_logits(Var logits, Tensor labels);

    void backward(Var root);

    const Tensor& value(Var v) const { return nodes_[check(v)].value; }
    // Zero tensor unless backward() touched the node.
    const Tensor& grad(Var v) const;
    std::size_t size() const noexcept { return nodes_.size(); }

private:
    enum class Op : std::uint8_t {
        leaf,
        add,
        sub,
        mul,
        scale,
        matmul,
        add_row_vec,
        relu,
        tanh,
        sigmoid,
        sum_all,
        mean_all,
        row_sums,
        reshape,
        slice_cols,
        concat_cols,
        dropout,
        bce_with_logits,
    };

    struct Node {
        Op op = Op::leaf;
        bool needs_grad = false;
        bool touched = false;
        std::array<int, 2> parents{-1, -1};
        std::vector<int> extra_parents;
        Tensor value;
        Tensor grad;
        Tensor aux;                       // dropout mask, bce labels
        std::vector<std::size_t> indices; // slice columns
        double scalar = 0.0;
        bool flag_a = false; // matmul trans_a
        bool flag_b = false; // matmul trans_b
    };

    int check(Var v) const;
    Var push(Node node);
    bool any_needs_grad(Var a, Var b = Var{}) const;
    Tensor& grad_buffer(int idx);
    void backprop_node(int idx);

    std::vector<Node> nodes_;
    bool recording_ = true;
    Tensor zero_grad_;
};

// Ordered list of named parameter tensors. Order is the binding order on a
// tape and the layout order for optimizer state.
class ParamRegistry {
public:
    void add(std::string name, Tensor& tensor) { entries_.push_back({std::move(name), &tensor}); }

    std::size_t count() const noexcept { return entries_.size(); }
    std::size_t total_size() const;
    const std::string& name(std::size_t i) const { return entries_[i].name; }
    Tensor& tensor(std::size_t i) const { return *entries_[i].tensor; }

private:
    struct Entry {
        std::string name;
        Tensor* tensor;
    };
    std::vector<Entry> entries_;
};

// Builds the objective on a fresh tape, runs backward from its scalar root,
// and returns the value plus one gradient tensor per registry entry.
struct GradResult {
    double value = 0.0;
    std::vector<Tensor> grads;
};

using Objective = std::function<Var(Tape&, const std::vector<Var>&)>;

GradResult value_and_grad(const Objective& objective, const ParamRegistry& params);

// Tape-side view of an Mlp: parameters bound in visit order.
struct MlpVars {
    const Mlp* net = nullptr;
    std::vector<Var> weights;
    std::vector<Var> biases;
};

MlpVars bind_mlp(Tape& tape, const Mlp& net);

// Same arithmetic as the tensor-level mlp_forward, node by node, so eval
// through either path is bit-identical.
Var mlp_forward(Tape& tape, const MlpVars& net, Var input, bool training = false,
                Rng* rng = nullptr);

} // namespace superman
