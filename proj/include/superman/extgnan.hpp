#pragma once

#include <string>
#include <vector>

#include "superman/mlp.hpp"
#include "superman/signal_graph.hpp"
#include "superman/tape.hpp"
#include "superman/tensor.hpp"

#include "nlohmann/json_fwd.hpp"

namespace superman {

// masked: a pair contributes only where a directed path exists (diagonal
// included). literal: every pair contributes with its raw signed gap.
enum class DeltaMode { masked, literal };

DeltaMode delta_mode_from_string(const std::string& s);
std::string to_string(DeltaMode m);

enum class EncoderAblation { none, rho_const_one, psi_identity, node_mlp, gnan_univariate };

EncoderAblation encoder_ablation_from_string(const std::string& s);
std::string to_string(EncoderAblation a);

// One subset's encoder: a scalar distance net rho over pairwise temporal
// gaps and one shape net psi per feature group, combined by summation only.
struct ExtGnanParams {
    Mlp rho;              // 1 -> ... -> 1
    std::vector<Mlp> psi; // psi[l]: |F_l| -> ... -> |F_l|
    FeatureGrouping grouping;
    DeltaMode delta_mode = DeltaMode::masked;
    EncoderAblation ablation = EncoderAblation::none;
    DeltaPolicy delta_policy = DeltaPolicy::full;
    std::size_t window = 0;
    // rho sees delta / time_scale.
    double time_scale = 1.0;

    std::size_t feature_dim() const { return grouping.feature_dim(); }
    bool uses_rho() const {
        return ablation == EncoderAblation::none || ablation == EncoderAblation::psi_identity ||
               ablation == EncoderAblation::gnan_univariate;
    }
    bool uses_psi() const { return ablation != EncoderAblation::psi_identity; }

    void validate() const;

    template <typename Fn>
    void visit_params(const std::string& prefix, Fn&& fn) {
        if (uses_rho()) rho.visit_params(prefix + ".rho", fn);
        if (uses_psi()) {
            for (std::size_t l = 0; l < psi.size(); ++l) {
                psi[l].visit_params(prefix + ".psi" + std::to_string(l), fn);
            }
        }
    }
};

ExtGnanParams make_extgnan(const FeatureGrouping& grouping, std::size_t hidden,
                           std::size_t layers, Activation activation, double dropout,
                           std::uint64_t seed);

// Pair gate: policy pattern intersected with reachability (masked mode) or
// with nothing (literal mode). Entry (w, j) gates the weight of source node w
// in the representation of node j.
Tensor pair_gate_matrix(const ExtGnanParams& params, const SignalGraph& graph);

// rho evaluated on every pair gap, times the gate: R[w][j].
// Ablations: rho_const_one leaves the bare gate; node_mlp keeps only the
// diagonal with weight one.
Tensor pair_weight_matrix(const ExtGnanParams& params, const SignalGraph& graph);

// Shape-net outputs per group, [n, |F_l|] each.
std::vector<Tensor> psi_outputs(const ExtGnanParams& params, const SignalGraph& graph);

// Representation layout: concatenated group blocks in declaration order.
Tensor node_representation(const ExtGnanParams& params, const SignalGraph& graph, std::size_t j);
Tensor graph_representation(const ExtGnanParams& params, const SignalGraph& graph);

// term[w][j] = R[w][j] * sum over all shape-net outputs of node w. Column j
// sums to the total contribution of node j.
Tensor node_contribution_terms(const ExtGnanParams& params, const SignalGraph& graph);

// Tape-side evaluation; arithmetic mirrors graph_representation node for
// node, so values agree bitwise with the tensor path.
struct ExtGnanVars {
    const ExtGnanParams* params = nullptr;
    MlpVars rho;
    std::vector<MlpVars> psi;
};

ExtGnanVars bind_extgnan(Tape& tape, const ExtGnanParams& params);
// Returns a [1, d] representation (zero-filled constant when n == 0).
Var tape_graph_representation(Tape& tape, const ExtGnanVars& vars, const SignalGraph& graph,
                              bool training = false, Rng* rng = nullptr);

nlohmann::json extgnan_to_json(const ExtGnanParams& params);
ExtGnanParams extgnan_from_json(const nlohmann::json& j);

} // namespace superman
