#include "superman/tape.hpp"

#include <cmath>

#include "superman/kernels.hpp"

namespace superman {

int Tape::check(Var v) const {
    if (!v.valid() || v.index >= static_cast<int>(nodes_.size())) {
        throw InvalidShape("Var does not belong to this tape");
    }
    return v.index;
}

Var Tape::push(Node node) {
    nodes_.push_back(std::move(node));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

bool Tape::any_needs_grad(Var a, Var b) const {
    bool n = a.valid() && nodes_[a.index].needs_grad;
    if (b.valid()) n = n || nodes_[b.index].needs_grad;
    return n && recording_;
}

Var Tape::constant(Tensor value) {
    Node n;
    n.op = Op::leaf;
    n.value = std::move(value);
    n.needs_grad = false;
    return push(std::move(n));
}

Var Tape::param(Tensor value) {
    Node n;
    n.op = Op::leaf;
    n.value = std::move(value);
    n.needs_grad = recording_;
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    if (!va.same_shape(vb)) throw InvalidShape("add: shape mismatch");
    Node n;
    n.op = Op::add;
    n.parents = {a.index, b.index};
    n.needs_grad = any_needs_grad(a, b);
    n.value = va;
    for (std::size_t i = 0; i < vb.size(); ++i) n.value[i] += vb[i];
    return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    if (!va.same_shape(vb)) throw InvalidShape("sub: shape mismatch");
    Node n;
    n.op = Op::sub;
    n.parents = {a.index, b.index};
    n.needs_grad = any_needs_grad(a, b);
    n.value = va;
    for (std::size_t i = 0; i < vb.size(); ++i) n.value[i] -= vb[i];
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    if (!va.same_shape(vb)) throw InvalidShape("mul: shape mismatch");
    Node n;
    n.op = Op::mul;
    n.parents = {a.index, b.index};
    n.needs_grad = any_needs_grad(a, b);
    n.value = va;
    for (std::size_t i = 0; i < vb.size(); ++i) n.value[i] *= vb[i];
    return push(std::move(n));
}

Var Tape::scale(Var a, double c) {
    Node n;
    n.op = Op::scale;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.scalar = c;
    n.value = value(a);
    for (double& x : n.value.values()) x *= c;
    return push(std::move(n));
}

Var Tape::matmul(Var a, Var b, bool trans_a, bool trans_b) {
    Node n;
    n.op = Op::matmul;
    n.parents = {a.index, b.index};
    n.needs_grad = any_needs_grad(a, b);
    n.flag_a = trans_a;
    n.flag_b = trans_b;
    n.value = kernels::matmul(value(a), value(b), trans_a, trans_b);
    return push(std::move(n));
}

Var Tape::add_row_vec(Var m, Var bias) {
    const Tensor& vm = value(m);
    const Tensor& vb = value(bias);
    if (vm.dim() != 2 || vb.dim() != 1 || vb.size() != vm.cols()) {
        throw InvalidShape("add_row_vec: expected [r,c] and [c]");
    }
    Node n;
    n.op = Op::add_row_vec;
    n.parents = {m.index, bias.index};
    n.needs_grad = any_needs_grad(m, bias);
    n.value = vm;
    for (std::size_t i = 0; i < vm.rows(); ++i) {
        for (std::size_t j = 0; j < vm.cols(); ++j) n.value(i, j) += vb[j];
    }
    return push(std::move(n));
}

Var Tape::relu(Var a) {
    Node n;
    n.op = Op::relu;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.value = value(a);
    apply_activation(Activation::relu, n.value);
    return push(std::move(n));
}

Var Tape::tanh(Var a) {
    Node n;
    n.op = Op::tanh;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.value = value(a);
    apply_activation(Activation::tanh, n.value);
    return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
    Node n;
    n.op = Op::sigmoid;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.value = value(a);
    apply_output_activation(OutputActivation::sigmoid, n.value);
    return push(std::move(n));
}

Var Tape::sum_all(Var a) {
    Node n;
    n.op = Op::sum_all;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    double acc = 0.0;
    for (double x : value(a).values()) acc += x;
    n.value = Tensor::scalar(acc);
    return push(std::move(n));
}

Var Tape::mean_all(Var a) {
    const std::size_t count = value(a).size();
    if (count == 0) throw InvalidShape("mean_all of empty tensor");
    Node n;
    n.op = Op::mean_all;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.scalar = 1.0 / static_cast<double>(count);
    double acc = 0.0;
    for (double x : value(a).values()) acc += x;
    n.value = Tensor::scalar(acc * n.scalar);
    return push(std::move(n));
}

Var Tape::row_sums(Var a) {
    const Tensor& va = value(a);
    if (va.dim() != 2) throw InvalidShape("row_sums requires a rank-2 tensor");
    Node n;
    n.op = Op::row_sums;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.value = Tensor({va.rows()});
    for (std::size_t i = 0; i < va.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < va.cols(); ++j) acc += va(i, j);
        n.value[i] = acc;
    }
    return push(std::move(n));
}

Var Tape::reshape(Var a, std::vector<std::size_t> shape) {
    Node n;
    n.op = Op::reshape;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.value = value(a).reshaped(std::move(shape));
    return push(std::move(n));
}

Var Tape::slice_cols(Var a, std::vector<std::size_t> cols) {
    const Tensor& va = value(a);
    if (va.dim() != 2) throw InvalidShape("slice_cols requires a rank-2 tensor");
    for (std::size_t c : cols) {
        if (c >= va.cols()) throw InvalidShape("slice_cols column out of range");
    }
    Node n;
    n.op = Op::slice_cols;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.value = Tensor({va.rows(), cols.size()});
    for (std::size_t i = 0; i < va.rows(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) n.value(i, j) = va(i, cols[j]);
    }
    n.indices = std::move(cols);
    return push(std::move(n));
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw InvalidShape("concat_cols of no parts");
    std::size_t rows = value(parts[0]).rows();
    std::size_t total = 0;
    bool needs = false;
    for (Var p : parts) {
        const Tensor& v = value(p);
        if (v.dim() != 2 || v.rows() != rows) throw InvalidShape("concat_cols: row mismatch");
        total += v.cols();
        needs = needs || nodes_[p.index].needs_grad;
    }
    Node n;
    n.op = Op::concat_cols;
    n.needs_grad = needs && recording_;
    n.value = Tensor({rows, total});
    std::size_t off = 0;
    for (Var p : parts) {
        const Tensor& v = value(p);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < v.cols(); ++j) n.value(i, off + j) = v(i, j);
        }
        off += v.cols();
        n.extra_parents.push_back(p.index);
    }
    return push(std::move(n));
}

Var Tape::dropout(Var a, double p, Rng& rng) {
    if (p < 0.0 || p >= 1.0) throw InvalidConfig("dropout rate must lie in [0,1)");
    Node n;
    n.op = Op::dropout;
    n.parents = {a.index, -1};
    n.needs_grad = any_needs_grad(a);
    n.aux = dropout_mask(value(a).shape(), p, rng);
    n.value = value(a);
    for (std::size_t i = 0; i < n.value.size(); ++i) n.value[i] *= n.aux[i];
    return push(std::move(n));
}

Var Tape::bce_with_logits(Var logits, Tensor labels) {
    const Tensor& z = value(logits);
    if (z.size() != labels.size() || z.size() == 0) {
        throw InvalidShape("bce_with_logits: logits/labels size mismatch");
    }
    Node n;
    n.op = Op::bce_with_logits;
    n.parents = {logits.index, -1};
    n.needs_grad = any_needs_grad(logits);
    // softplus(x) = log(1+exp(x)) evaluated stably; per-sample loss is
    // y*softplus(-z) + (1-y)*softplus(z).
    auto softplus = [](double x) {
        return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    };
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double y = labels[i];
        acc += y * softplus(-z[i]) + (1.0 - y) * softplus(z[i]);
    }
    n.scalar = 1.0 / static_cast<double>(z.size());
    n.value = Tensor::scalar(acc * n.scalar);
    n.aux = std::move(labels);
    return push(std::move(n));
}

const Tensor& Tape::grad(Var v) const {
    const Node& n = nodes_[check(v)];
    if (!n.touched) {
        // Materialize a zero of the right shape lazily.
        const_cast<Tape*>(this)->zero_grad_ = Tensor(n.value.shape());
        return zero_grad_;
    }
    return n.grad;
}

Tensor& Tape::grad_buffer(int idx) {
    Node& n = nodes_[idx];
    if (!n.touched) {
        n.grad = Tensor(n.value.shape());
        n.touched = true;
    }
    return n.grad;
}

void Tape::backward(Var root) {
    const int r = check(root);
    if (nodes_[r].value.size() != 1) throw InvalidShape("backward requires a scalar root");
    if (!recording_) throw InvalidConfig("backward on a non-recording tape");
    grad_buffer(r)[0] = 1.0;
    for (int i = r; i >= 0; --i) {
        if (nodes_[i].touched && nodes_[i].needs_grad) backprop_node(i);
    }
}

void Tape::backprop_node(int idx) {
    Node& n = nodes_[idx];
    const Tensor& g = n.grad;
    auto parent_needs = [&](int p) { return p >= 0 && nodes_[p].needs_grad; };

    switch (n.op) {
        case Op::leaf:
            break;
        case Op::add: {
            for (int k = 0; k < 2; ++k) {
                if (!parent_needs(n.parents[k])) continue;
                Tensor& pg = grad_buffer(n.parents[k]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
            }
            break;
        }
        case Op::sub: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
            }
            if (parent_needs(n.parents[1])) {
                Tensor& pg = grad_buffer(n.parents[1]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] -= g[i];
            }
            break;
        }
        case Op::mul: {
            const Tensor& va = nodes_[n.parents[0]].value;
            const Tensor& vb = nodes_[n.parents[1]].value;
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i] * vb[i];
            }
            if (parent_needs(n.parents[1])) {
                Tensor& pg = grad_buffer(n.parents[1]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i] * va[i];
            }
            break;
        }
        case Op::scale: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i] * n.scalar;
            }
            break;
        }
        case Op::matmul: {
            // C = op(A)·op(B). Gradients follow from dA = dC·op(B)^T and
            // dB = op(A)^T·dC, transposed back through the operand flags.
            const Tensor& va = nodes_[n.parents[0]].value;
            const Tensor& vb = nodes_[n.parents[1]].value;
            if (parent_needs(n.parents[0])) {
                Tensor da = n.flag_a ? kernels::matmul(vb, g, n.flag_b, true)
                                     : kernels::matmul(g, vb, false, !n.flag_b);
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += da[i];
            }
            if (parent_needs(n.parents[1])) {
                Tensor db = n.flag_b ? kernels::matmul(g, va, true, n.flag_a)
                                     : kernels::matmul(va, g, !n.flag_a, false);
                Tensor& pg = grad_buffer(n.parents[1]);
                for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += db[i];
            }
            break;
        }
        case Op::add_row_vec: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
            }
            if (parent_needs(n.parents[1])) {
                Tensor& pg = grad_buffer(n.parents[1]);
                for (std::size_t i = 0; i < g.rows(); ++i) {
                    for (std::size_t j = 0; j < g.cols(); ++j) pg[j] += g(i, j);
                }
            }
            break;
        }
        case Op::relu: {
            if (parent_needs(n.parents[0])) {
                const Tensor& x = nodes_[n.parents[0]].value;
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += x[i] > 0.0 ? g[i] : 0.0;
            }
            break;
        }
        case Op::tanh: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    pg[i] += g[i] * (1.0 - n.value[i] * n.value[i]);
                }
            }
            break;
        }
        case Op::sigmoid: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    pg[i] += g[i] * n.value[i] * (1.0 - n.value[i]);
                }
            }
            break;
        }
        case Op::sum_all: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (double& x : pg.values()) x += g[0];
            }
            break;
        }
        case Op::mean_all: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                const double s = g[0] * n.scalar;
                for (double& x : pg.values()) x += s;
            }
            break;
        }
        case Op::row_sums: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < pg.rows(); ++i) {
                    for (std::size_t j = 0; j < pg.cols(); ++j) pg(i, j) += g[i];
                }
            }
            break;
        }
        case Op::reshape: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
            }
            break;
        }
        case Op::slice_cols: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.rows(); ++i) {
                    for (std::size_t j = 0; j < n.indices.size(); ++j) {
                        pg(i, n.indices[j]) += g(i, j);
                    }
                }
            }
            break;
        }
        case Op::concat_cols: {
            std::size_t off = 0;
            for (int p : n.extra_parents) {
                const std::size_t w = nodes_[p].value.cols();
                if (parent_needs(p)) {
                    Tensor& pg = grad_buffer(p);
                    for (std::size_t i = 0; i < g.rows(); ++i) {
                        for (std::size_t j = 0; j < w; ++j) pg(i, j) += g(i, off + j);
                    }
                }
                off += w;
            }
            break;
        }
        case Op::dropout: {
            if (parent_needs(n.parents[0])) {
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i] * n.aux[i];
            }
            break;
        }
        case Op::bce_with_logits: {
            if (parent_needs(n.parents[0])) {
                const Tensor& z = nodes_[n.parents[0]].value;
                Tensor& pg = grad_buffer(n.parents[0]);
                for (std::size_t i = 0; i < z.size(); ++i) {
                    pg[i] += g[0] * n.scalar * (stable_sigmoid(z[i]) - n.aux[i]);
                }
            }
            break;
        }
    }
}

std::size_t ParamRegistry::total_size() const {
    std::size_t n = 0;
    for (const Entry& e : entries_) n += e.tensor->size();
    return n;
}

GradResult value_and_grad(const Objective& objective, const ParamRegistry& params) {
    Tape tape(true);
    std::vector<Var> vars;
    vars.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) vars.push_back(tape.param(params.tensor(i)));
    Var root = objective(tape, vars);
    if (tape.value(root).size() != 1) throw InvalidShape("objective must produce a scalar");
    GradResult out;
    out.value = tape.value(root).item();
    ensure_finite(out.value, "objective value");
    tape.backward(root);
    out.grads.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        out.grads.push_back(tape.grad(vars[i]));
        ensure_finite(out.grads.back(), "gradient of " + params.name(i));
    }
    return out;
}

MlpVars bind_mlp(Tape& tape, const Mlp& net) {
    MlpVars vars;
    vars.net = &net;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        vars.weights.push_back(tape.param(net.weights[l]));
        vars.biases.push_back(tape.param(net.biases[l]));
    }
    return vars;
}

Var mlp_forward(Tape& tape, const MlpVars& net, Var input, bool training, Rng* rng) {
    const Mlp& m = *net.net;
    m.validate();
    Var x = input;
    if (tape.value(x).dim() == 1) {
        x = tape.reshape(x, {1, tape.value(x).size()});
    }
    if (tape.value(x).cols() != m.input_dim()) {
        throw InvalidShape("mlp_forward input width does not match layer_dims[0]");
    }
    if (training && m.dropout_rate > 0.0 && rng == nullptr) {
        throw InvalidConfig("training-mode dropout requires an rng");
    }
    const std::size_t layers = m.layer_count();
    for (std::size_t l = 0; l < layers; ++l) {
        Var y = tape.add_row_vec(tape.matmul(x, net.weights[l]), net.biases[l]);
        const bool is_last = (l + 1 == layers);
        if (!is_last) {
            switch (m.activation) {
                case Activation::relu: y = tape.relu(y); break;
                case Activation::tanh: y = tape.tanh(y); break;
                case Activation::identity: break;
            }
            if (training && m.dropout_rate > 0.0) y = tape.dropout(y, m.dropout_rate, *rng);
        } else if (m.output_activation == OutputActivation::sigmoid) {
            y = tape.sigmoid(y);
        }
        x = y;
    }
    return x;
}

} // namespace superman
