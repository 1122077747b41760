#include "superman/extgnan.hpp"

#include "superman/kernels.hpp"

#include "nlohmann/json.hpp"

namespace superman {

DeltaMode delta_mode_from_string(const std::string& s) {
    if (s == "masked") return DeltaMode::masked;
    if (s == "literal") return DeltaMode::literal;
    throw InvalidConfig("unknown delta mode: " + s);
}

std::string to_string(DeltaMode m) { return m == DeltaMode::masked ? "masked" : "literal"; }

EncoderAblation encoder_ablation_from_string(const std::string& s) {
    if (s == "none") return EncoderAblation::none;
    if (s == "rho_const_one") return EncoderAblation::rho_const_one;
    if (s == "psi_identity") return EncoderAblation::psi_identity;
    if (s == "node_mlp") return EncoderAblation::node_mlp;
    if (s == "gnan_univariate") return EncoderAblation::gnan_univariate;
    throw InvalidConfig("unknown encoder ablation: " + s);
}

std::string to_string(EncoderAblation a) {
    switch (a) {
        case EncoderAblation::none: return "none";
        case EncoderAblation::rho_const_one: return "rho_const_one";
        case EncoderAblation::psi_identity: return "psi_identity";
        case EncoderAblation::node_mlp: return "node_mlp";
        case EncoderAblation::gnan_univariate: return "gnan_univariate";
    }
    return "none";
}

void ExtGnanParams::validate() const {
    grouping.validate();
    if (rho.layer_dims.front() != 1 || rho.layer_dims.back() != 1) {
        throw InvalidShape("rho must map a scalar gap to a scalar weight");
    }
    if (psi.size() != grouping.group_count()) {
        throw InvalidShape("psi count does not match feature group count");
    }
    for (std::size_t l = 0; l < psi.size(); ++l) {
        const std::size_t width = grouping.groups[l].size();
        if (psi[l].input_dim() != width || psi[l].output_dim() != width) {
            throw InvalidShape("psi[" + std::to_string(l) + "] must map width " +
                               std::to_string(width) + " to itself");
        }
    }
    if (ablation == EncoderAblation::gnan_univariate && !grouping.all_singleton()) {
        throw InvalidConfig("gnan_univariate requires all-singleton feature groups");
    }
    if (delta_policy == DeltaPolicy::window && window < 1) {
        throw InvalidConfig("window policy requires window >= 1");
    }
    if (time_scale <= 0.0) throw InvalidConfig("time_scale must be positive");
}

ExtGnanParams make_extgnan(const FeatureGrouping& grouping, std::size_t hidden,
                           std::size_t layers, Activation activation, double dropout,
                           std::uint64_t seed) {
    grouping.validate();
    if (layers < 1) throw InvalidConfig("layers must be at least 1");
    ExtGnanParams p;
    p.grouping = grouping;
    auto dims = [&](std::size_t width) {
        std::vector<std::size_t> d{width};
        for (std::size_t i = 0; i + 1 < layers; ++i) d.push_back(hidden);
        d.push_back(width);
        return d;
    };
    p.rho = Mlp::make(dims(1), activation, OutputActivation::identity, dropout);
    init_params(p.rho, mix_seed(seed, 0x726863));
    // Unit pair weight at init: the encoder starts as a plain shape-net sum
    // instead of multiplying everything by a near-zero learned weight.
    p.rho.biases.back()[0] = 1.0;
    for (std::size_t l = 0; l < grouping.group_count(); ++l) {
        p.psi.push_back(
            Mlp::make(dims(grouping.groups[l].size()), activation, OutputActivation::identity,
                      dropout));
        init_params(p.psi.back(), mix_seed(seed, 0x707369, l));
    }
    p.validate();
    return p;
}

namespace {

bool policy_keeps(const ExtGnanParams& p, std::size_t u, std::size_t v) {
    if (p.delta_policy == DeltaPolicy::full) return true;
    const std::size_t w = p.delta_policy == DeltaPolicy::adjacent_only ? 1 : p.window;
    const std::size_t gap = u > v ? u - v : v - u;
    return gap <= w;
}

// rho input column [n*n, 1]: entry w*n+j holds delta(w, j) / time_scale.
Tensor rho_input(const ExtGnanParams& p, const SignalGraph& g) {
    const std::size_t n = g.node_count();
    Tensor in({n * n, 1});
    for (std::size_t i = 0; i < n * n; ++i) in[i] = g.delta[i] / p.time_scale;
    return in;
}

} // namespace

Tensor pair_gate_matrix(const ExtGnanParams& params, const SignalGraph& graph) {
    const std::size_t n = graph.node_count();
    Tensor gate({n, n});
    if (params.ablation == EncoderAblation::node_mlp) {
        for (std::size_t i = 0; i < n; ++i) gate(i, i) = 1.0;
        return gate;
    }
    for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool reach_ok =
                params.delta_mode == DeltaMode::literal || graph.reachable(w, j);
            gate(w, j) = (reach_ok && policy_keeps(params, w, j)) ? 1.0 : 0.0;
        }
    }
    return gate;
}

Tensor pair_weight_matrix(const ExtGnanParams& params, const SignalGraph& graph) {
    params.validate();
    const std::size_t n = graph.node_count();
    Tensor gate = pair_gate_matrix(params, graph);
    if (!params.uses_rho()) return gate;
    if (n == 0) return gate;
    Tensor rho_out = mlp_forward(params.rho, rho_input(params, graph));
    Tensor weights = rho_out.reshaped({n, n});
    for (std::size_t i = 0; i < n * n; ++i) weights[i] *= gate[i];
    return weights;
}

std::vector<Tensor> psi_outputs(const ExtGnanParams& params, const SignalGraph& graph) {
    params.validate();
    const std::size_t n = graph.node_count();
    std::vector<Tensor> outs;
    outs.reserve(params.grouping.group_count());
    for (std::size_t l = 0; l < params.grouping.group_count(); ++l) {
        const auto& group = params.grouping.groups[l];
        Tensor block({n, group.size()});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < group.size(); ++c) {
                block(i, c) = graph.node_features(i, group[c]);
            }
        }
        outs.push_back(params.uses_psi() ? mlp_forward(params.psi[l], block) : std::move(block));
    }
    return outs;
}

Tensor node_representation(const ExtGnanParams& params, const SignalGraph& graph, std::size_t j) {
    const std::size_t n = graph.node_count();
    if (j >= n) throw InvalidNode("node index " + std::to_string(j) + " out of range");
    const Tensor weights = pair_weight_matrix(params, graph);
    const std::vector<Tensor> psis = psi_outputs(params, graph);
    Tensor rep({params.feature_dim()});
    std::size_t off = 0;
    for (const Tensor& block : psis) {
        for (std::size_t c = 0; c < block.cols(); ++c) {
            double acc = 0.0;
            for (std::size_t w = 0; w < n; ++w) acc += weights(w, j) * block(w, c);
            rep[off + c] = acc;
        }
        off += block.cols();
    }
    return rep;
}

Tensor graph_representation(const ExtGnanParams& params, const SignalGraph& graph) {
    params.validate();
    const std::size_t n = graph.node_count();
    if (n == 0) return Tensor({params.feature_dim()});
    const Tensor weights = pair_weight_matrix(params, graph);
    const std::vector<Tensor> psis = psi_outputs(params, graph);
    // h_G restricted to group l is sum_w (sum_j R[w][j]) psi_l(x_w): the
    // source strengths s[w] contract once against each block.
    Tensor s({1, n});
    for (std::size_t w = 0; w < n; ++w) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += weights(w, j);
        s(0, w) = acc;
    }
    Tensor rep({params.feature_dim()});
    std::size_t off = 0;
    for (const Tensor& block : psis) {
        Tensor part = kernels::matmul(s, block);
        for (std::size_t c = 0; c < block.cols(); ++c) rep[off + c] = part(0, c);
        off += block.cols();
    }
    return rep;
}

Tensor node_contribution_terms(const ExtGnanParams& params, const SignalGraph& graph) {
    params.validate();
    const std::size_t n = graph.node_count();
    const Tensor weights = pair_weight_matrix(params, graph);
    const std::vector<Tensor> psis = psi_outputs(params, graph);
    std::vector<double> psi_row_sum(n, 0.0);
    for (const Tensor& block : psis) {
        for (std::size_t w = 0; w < n; ++w) {
            for (std::size_t c = 0; c < block.cols(); ++c) psi_row_sum[w] += block(w, c);
        }
    }
    Tensor terms({n, n});
    for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t j = 0; j < n; ++j) terms(w, j) = weights(w, j) * psi_row_sum[w];
    }
    return terms;
}

ExtGnanVars bind_extgnan(Tape& tape, const ExtGnanParams& params) {
    params.validate();
    ExtGnanVars vars;
    vars.params = &params;
    if (params.uses_rho()) vars.rho = bind_mlp(tape, params.rho);
    if (params.uses_psi()) {
        for (const Mlp& net : params.psi) vars.psi.push_back(bind_mlp(tape, net));
    }
    return vars;
}

Var tape_graph_representation(Tape& tape, const ExtGnanVars& vars, const SignalGraph& graph,
                              bool training, Rng* rng) {
    const ExtGnanParams& params = *vars.params;
    const std::size_t n = graph.node_count();
    const std::size_t d = params.feature_dim();
    if (n == 0) return tape.constant(Tensor({1, d}));

    Var weights;
    {
        Var gate = tape.constant(pair_gate_matrix(params, graph));
        if (params.uses_rho()) {
            Var rho_out = mlp_forward(tape, vars.rho, tape.constant(rho_input(params, graph)),
                                      training, rng);
            weights = tape.mul(tape.reshape(rho_out, {n, n}), gate);
        } else {
            weights = gate;
        }
    }
    Var s = tape.reshape(tape.row_sums(weights), {1, n});

    std::vector<Var> parts;
    parts.reserve(params.grouping.group_count());
    for (std::size_t l = 0; l < params.grouping.group_count(); ++l) {
        const auto& group = params.grouping.groups[l];
        Tensor block({n, group.size()});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < group.size(); ++c) {
                block(i, c) = graph.node_features(i, group[c]);
            }
        }
        Var x = tape.constant(std::move(block));
        if (params.uses_psi()) x = mlp_forward(tape, vars.psi[l], x, training, rng);
        parts.push_back(tape.matmul(s, x));
    }
    return parts.size() == 1 ? parts[0] : tape.concat_cols(parts);
}

nlohmann::json extgnan_to_json(const ExtGnanParams& params) {
    nlohmann::json j;
    j["rho"] = mlp_to_json(params.rho);
    j["psi"] = nlohmann::json::array();
    for (const Mlp& net : params.psi) j["psi"].push_back(mlp_to_json(net));
    j["grouping"] = params.grouping.groups;
    j["delta_mode"] = to_string(params.delta_mode);
    j["ablation"] = to_string(params.ablation);
    j["delta_policy"] = to_string(params.delta_policy);
    j["window"] = params.window;
    j["time_scale"] = params.time_scale;
    return j;
}

ExtGnanParams extgnan_from_json(const nlohmann::json& j) {
    ExtGnanParams p;
    p.rho = mlp_from_json(j.at("rho"));
    for (const auto& jn : j.at("psi")) p.psi.push_back(mlp_from_json(jn));
    p.grouping.groups = j.at("grouping").get<std::vector<std::vector<std::size_t>>>();
    p.delta_mode = delta_mode_from_string(j.at("delta_mode").get<std::string>());
    p.ablation = encoder_ablation_from_string(j.at("ablation").get<std::string>());
    p.delta_policy = delta_policy_from_string(j.at("delta_policy").get<std::string>());
    p.window = j.value("window", std::size_t{0});
    p.time_scale = j.value("time_scale", 1.0);
    p.validate();
    return p;
}

} // namespace superman
