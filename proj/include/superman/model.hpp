#pragma once

#include <optional>
#include <string>
#include <vector>

#include "superman/extgnan.hpp"
#include "superman/signal_graph.hpp"
#include "superman/tape.hpp"

#include "nlohmann/json_fwd.hpp"

namespace superman {

enum class LinkFunction { identity, sigmoid };
enum class Pooling { sum, mean };

LinkFunction link_from_string(const std::string& s);
std::string to_string(LinkFunction l);
Pooling pooling_from_string(const std::string& s);
std::string to_string(Pooling p);

// Model-level ablation switches. mean_pool replaces the set mixer with plain
// mean pooling; the others select the matching encoder ablation.
enum class ModelAblation { none, mean_pool, rho_const_one, node_mlp, psi_identity, gnan_univariate };

ModelAblation model_ablation_from_string(const std::string& s);
std::string to_string(ModelAblation a);
EncoderAblation encoder_ablation_of(ModelAblation a);

// Set mixer: elementwise net f, order-independent pooling, then net g.
struct DeepSetsParams {
    Mlp f;
    Mlp g;
    Pooling pooling = Pooling::sum;

    void validate(std::size_t rep_dim) const;

    template <typename Fn>
    void visit_params(const std::string& prefix, Fn&& fn) {
        f.visit_params(prefix + ".f", fn);
        g.visit_params(prefix + ".g", fn);
    }
};

struct SubsetModule {
    ExtGnanParams encoder;
    std::optional<DeepSetsParams> mixer; // present iff the subset can hold >1 graph
    bool mixer_bypassed = false;         // mean_pool ablation
    std::size_t rep_dim = 0;

    template <typename Fn>
    void visit_params(const std::string& prefix, Fn&& fn) {
        encoder.visit_params(prefix + ".enc", fn);
        if (mixer && !mixer_bypassed) mixer->visit_params(prefix + ".mix", fn);
    }
};

struct ModelConfig {
    std::size_t hidden = 32;
    std::size_t layers = 3;
    Activation activation = Activation::relu;
    double dropout = 0.0;
    DeltaMode delta_mode = DeltaMode::masked;
    DeltaPolicy delta_policy = DeltaPolicy::full;
    std::size_t window = 0;
    double time_scale = 1.0;
    ModelAblation ablation = ModelAblation::none;
    LinkFunction link = LinkFunction::sigmoid;
    bool learn_output_bias = true;
};

struct SupermanModel {
    SubsetPartition partition;
    std::vector<SubsetModule> subsets;
    LinkFunction link = LinkFunction::sigmoid;
    Tensor output_bias = Tensor::scalar(0.0);
    bool learn_output_bias = true;
    ModelAblation ablation = ModelAblation::none;
    FeatureStats normalization;
    std::string timestamp_unit = "days";

    double bias() const { return output_bias[0]; }

    template <typename Fn>
    void visit_params(Fn&& fn) {
        if (learn_output_bias) fn("output_bias", output_bias);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            subsets[i].visit_params("s" + std::to_string(i), fn);
        }
    }

    void collect_params(ParamRegistry& registry) {
        visit_params([&](const std::string& name, Tensor& t) { registry.add(name, t); });
    }
};

// Builds one encoder per subset (with its feature grouping) and a DeepSets
// mixer for every subset that may hold more than one graph.
SupermanModel build_model(const SubsetPartition& partition,
                          const std::map<std::string, FeatureGrouping>& groupings,
                          const std::map<std::string, std::size_t>& feature_dims,
                          const ModelConfig& config, std::uint64_t seed);

// Member graph indices per subset in canonical content order, so that pooling
// is invariant to the order graphs arrive in.
std::vector<std::vector<std::size_t>> subset_members(const SupermanModel& model,
                                                     const GraphSet& set);

// Applies the model's stored normalization to a copy when stats exist.
SignalGraph normalized_graph(const SupermanModel& model, const SignalGraph& graph);

// Singleton subsets pass the graph representation through unchanged; multi
// graph subsets mix with DeepSets (or mean pooling when bypassed); empty
// subsets yield an exact zero vector.
Tensor subset_representation(const SupermanModel& model, std::size_t subset_index,
                             const std::vector<const SignalGraph*>& graphs);

double forward(const SupermanModel& model, const GraphSet& set);
double predict_proba(const SupermanModel& model, const GraphSet& set);

// Probability under a sigmoid link, raw logit otherwise.
double model_output(const SupermanModel& model, const GraphSet& set);

std::vector<double> predict_logits(const SupermanModel& model,
                                   const std::vector<const GraphSet*>& samples);
std::vector<double> predict_probs(const SupermanModel& model,
                                  const std::vector<const GraphSet*>& samples);

struct SubsetVars {
    ExtGnanVars encoder;
    MlpVars f;
    MlpVars g;
    bool has_mixer = false;
    bool bypassed = false;
};

struct ModelVars {
    const SupermanModel* model = nullptr;
    Var output_bias;
    std::vector<SubsetVars> subsets;
};

// Parameter binding order matches visit_params / collect_params exactly.
ModelVars bind_model(Tape& tape, const SupermanModel& model);

Var tape_forward(Tape& tape, const ModelVars& vars, const GraphSet& set, bool training = false,
                 Rng* rng = nullptr);

// Mean BCE over a batch, built on one tape.
Var tape_batch_loss(Tape& tape, const ModelVars& vars, const std::vector<const GraphSet*>& batch,
                    bool training = false, Rng* rng = nullptr);

nlohmann::json model_to_json(const SupermanModel& model);
SupermanModel model_from_json(const nlohmann::json& j);
void save_model(const SupermanModel& model, const std::string& path);
SupermanModel load_model(const std::string& path);

} // namespace superman
