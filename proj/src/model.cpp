#include "superman/model.hpp"

#include <algorithm>

#include "superman/dataset_io.hpp"
#include "superman/parallel.hpp"

#include "nlohmann/json.hpp"

namespace superman {

LinkFunction link_from_string(const std::string& s) {
    if (s == "identity") return LinkFunction::identity;
    if (s == "sigmoid") return LinkFunction::sigmoid;
    throw InvalidConfig("unknown link: " + s);
}

std::string to_string(LinkFunction l) {
    return l == LinkFunction::sigmoid ? "sigmoid" : "identity";
}

Pooling pooling_from_string(const std::string& s) {
    if (s == "sum") return Pooling::sum;
    if (s == "mean") return Pooling::mean;
    throw InvalidConfig("unknown pooling: " + s);
}

std::string to_string(Pooling p) { return p == Pooling::mean ? "mean" : "sum"; }

ModelAblation model_ablation_from_string(const std::string& s) {
    if (s == "none") return ModelAblation::none;
    if (s == "mean_pool") return ModelAblation::mean_pool;
    if (s == "rho1" || s == "rho_const_one") return ModelAblation::rho_const_one;
    if (s == "node_mlp") return ModelAblation::node_mlp;
    if (s == "identity" || s == "psi_identity") return ModelAblation::psi_identity;
    if (s == "gnan" || s == "gnan_univariate") return ModelAblation::gnan_univariate;
    throw InvalidConfig("unknown ablation: " + s);
}

std::string to_string(ModelAblation a) {
    switch (a) {
        case ModelAblation::none: return "none";
        case ModelAblation::mean_pool: return "mean_pool";
        case ModelAblation::rho_const_one: return "rho_const_one";
        case ModelAblation::node_mlp: return "node_mlp";
        case ModelAblation::psi_identity: return "psi_identity";
        case ModelAblation::gnan_univariate: return "gnan_univariate";
    }
    return "none";
}

EncoderAblation encoder_ablation_of(ModelAblation a) {
    switch (a) {
        case ModelAblation::rho_const_one: return EncoderAblation::rho_const_one;
        case ModelAblation::node_mlp: return EncoderAblation::node_mlp;
        case ModelAblation::psi_identity: return EncoderAblation::psi_identity;
        case ModelAblation::gnan_univariate: return EncoderAblation::gnan_univariate;
        case ModelAblation::none:
        case ModelAblation::mean_pool: return EncoderAblation::none;
    }
    return EncoderAblation::none;
}

void DeepSetsParams::validate(std::size_t rep_dim) const {
    if (f.input_dim() != rep_dim || f.output_dim() != rep_dim || g.input_dim() != rep_dim ||
        g.output_dim() != rep_dim) {
        throw InvalidShape("set mixer nets must map the representation width to itself");
    }
}

SupermanModel build_model(const SubsetPartition& partition,
                          const std::map<std::string, FeatureGrouping>& groupings,
                          const std::map<std::string, std::size_t>& feature_dims,
                          const ModelConfig& config, std::uint64_t seed) {
    std::vector<std::string> vocabulary;
    for (const Subset& s : partition.subsets) {
        vocabulary.insert(vocabulary.end(), s.signal_types.begin(), s.signal_types.end());
    }
    validate_partition(partition, groupings, vocabulary, feature_dims);

    SupermanModel model;
    model.partition = partition;
    model.link = config.link;
    model.ablation = config.ablation;
    model.learn_output_bias = config.learn_output_bias;

    for (std::size_t si = 0; si < partition.subsets.size(); ++si) {
        const Subset& s = partition.subsets[si];
        FeatureGrouping grouping;
        if (!s.signal_types.empty()) {
            auto it = groupings.find(s.signal_types.front());
            if (it != groupings.end()) {
                grouping = it->second;
            } else {
                auto dit = feature_dims.find(s.signal_types.front());
                grouping = FeatureGrouping::singletons(dit == feature_dims.end() ? 1 : dit->second);
            }
        } else {
            // Pure collector subset: grouping comes from any declared dim.
            grouping = FeatureGrouping::singletons(1);
            auto it = groupings.find(s.name);
            if (it != groupings.end()) grouping = it->second;
            auto dit = feature_dims.find(s.name);
            if (it == groupings.end() && dit != feature_dims.end()) {
                grouping = FeatureGrouping::singletons(dit->second);
            }
        }
        if (config.ablation == ModelAblation::gnan_univariate) {
            grouping = FeatureGrouping::singletons(grouping.feature_dim());
        }

        SubsetModule module;
        module.encoder = make_extgnan(grouping, config.hidden, config.layers, config.activation,
                                      config.dropout, mix_seed(seed, 0x656e63, si));
        module.encoder.delta_mode = config.delta_mode;
        module.encoder.ablation = encoder_ablation_of(config.ablation);
        module.encoder.delta_policy = config.delta_policy;
        module.encoder.window = config.window;
        module.encoder.time_scale = config.time_scale;
        module.encoder.validate();
        module.rep_dim = grouping.feature_dim();

        if (s.multi_graph()) {
            DeepSetsParams mixer;
            std::vector<std::size_t> dims{module.rep_dim};
            for (std::size_t i = 0; i + 1 < config.layers; ++i) dims.push_back(config.hidden);
            dims.push_back(module.rep_dim);
            mixer.f = Mlp::make(dims, config.activation, OutputActivation::identity,
                                config.dropout);
            mixer.g = Mlp::make(dims, config.activation, OutputActivation::identity,
                                config.dropout);
            init_params(mixer.f, mix_seed(seed, 0x6d6978, si, 0));
            init_params(mixer.g, mix_seed(seed, 0x6d6978, si, 1));
            mixer.pooling = config.ablation == ModelAblation::mean_pool ? Pooling::mean
                                                                        : Pooling::sum;
            mixer.validate(module.rep_dim);
            module.mixer = std::move(mixer);
            module.mixer_bypassed = config.ablation == ModelAblation::mean_pool;
        }
        model.subsets.push_back(std::move(module));
    }
    return model;
}

namespace {

std::vector<double> graph_content_key(const SignalGraph& g) {
    std::vector<double> key;
    key.reserve(1 + g.node_timestamps.size() + g.node_features.size());
    key.push_back(static_cast<double>(g.node_count()));
    key.insert(key.end(), g.node_timestamps.begin(), g.node_timestamps.end());
    key.insert(key.end(), g.node_features.values().begin(), g.node_features.values().end());
    return key;
}

bool canonical_less(const SignalGraph& a, const SignalGraph& b) {
    if (a.signal_type != b.signal_type) return a.signal_type < b.signal_type;
    return graph_content_key(a) < graph_content_key(b);
}

} // namespace

std::vector<std::vector<std::size_t>> subset_members(const SupermanModel& model,
                                                     const GraphSet& set) {
    const std::vector<std::size_t> binding = bind_graphs(model.partition, set);
    std::vector<std::vector<std::size_t>> members(model.subsets.size());
    for (std::size_t gi = 0; gi < set.graphs.size(); ++gi) members[binding[gi]].push_back(gi);
    for (auto& m : members) {
        std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
            return canonical_less(set.graphs[a], set.graphs[b]);
        });
    }
    return members;
}

SignalGraph normalized_graph(const SupermanModel& model, const SignalGraph& graph) {
    SignalGraph g = graph;
    if (!model.normalization.empty()) {
        GraphSet tmp;
        tmp.graphs.push_back(std::move(g));
        normalize_features(tmp, model.normalization);
        g = std::move(tmp.graphs.front());
    }
    return g;
}

namespace {

// Borrow the graph directly when no normalization applies.
const SignalGraph& maybe_normalized(const SupermanModel& model, const SignalGraph& g,
                                    SignalGraph& storage) {
    if (model.normalization.empty()) return g;
    storage = normalized_graph(model, g);
    return storage;
}

bool graph_binds_to(const SupermanModel& model, const SignalGraph& g, std::size_t subset_index) {
    GraphSet probe;
    probe.entity_id = "probe";
    probe.graphs.push_back(g);
    const auto binding = bind_graphs(model.partition, probe);
    return binding.front() == subset_index;
}

double sum_entries(const Tensor& t) {
    double acc = 0.0;
    for (double x : t.values()) acc += x;
    return acc;
}

Tensor subset_representation_impl(const SupermanModel& model, const SubsetModule& module,
                                  const std::vector<const SignalGraph*>& graphs) {
    if (graphs.empty()) return Tensor({module.rep_dim});

    std::vector<Tensor> reps;
    reps.reserve(graphs.size());
    SignalGraph storage;
    for (const SignalGraph* g : graphs) {
        reps.push_back(graph_representation(module.encoder, maybe_normalized(model, *g, storage)));
    }
    if (!module.mixer) {
        if (reps.size() != 1) {
            throw PartitionError("singleton subset received " + std::to_string(reps.size()) +
                                 " graphs");
        }
        return reps.front();
    }
    if (module.mixer_bypassed) {
        Tensor pooled({module.rep_dim});
        for (const Tensor& r : reps) {
            for (std::size_t c = 0; c < pooled.size(); ++c) pooled[c] += r[c];
        }
        const double inv = 1.0 / static_cast<double>(reps.size());
        for (double& x : pooled.values()) x *= inv;
        return pooled;
    }
    Tensor pooled({module.rep_dim});
    for (const Tensor& r : reps) {
        Tensor fx = mlp_forward(module.mixer->f, r.reshaped({1, module.rep_dim}));
        for (std::size_t c = 0; c < pooled.size(); ++c) pooled[c] += fx[c];
    }
    if (module.mixer->pooling == Pooling::mean) {
        const double inv = 1.0 / static_cast<double>(reps.size());
        for (double& x : pooled.values()) x *= inv;
    }
    Tensor out = mlp_forward(module.mixer->g, pooled.reshaped({1, module.rep_dim}));
    return out.reshaped({module.rep_dim});
}

} // namespace

Tensor subset_representation(const SupermanModel& model, std::size_t subset_index,
                             const std::vector<const SignalGraph*>& graphs) {
    if (subset_index >= model.subsets.size()) throw InvalidConfig("subset index out of range");
    for (const SignalGraph* g : graphs) {
        if (!graph_binds_to(model, *g, subset_index)) {
            throw PartitionError("graph of signal type '" + g->signal_type +
                                 "' does not belong to subset " + std::to_string(subset_index));
        }
    }
    return subset_representation_impl(model, model.subsets[subset_index], graphs);
}

double forward(const SupermanModel& model, const GraphSet& set) {
    const auto members = subset_members(model, set);
    double logit = model.bias();
    for (std::size_t si = 0; si < model.subsets.size(); ++si) {
        if (members[si].empty()) continue;
        std::vector<const SignalGraph*> graphs;
        graphs.reserve(members[si].size());
        for (std::size_t gi : members[si]) graphs.push_back(&set.graphs[gi]);
        logit += sum_entries(subset_representation_impl(model, model.subsets[si], graphs));
    }
    ensure_finite(logit, "model logit");
    return logit;
}

double predict_proba(const SupermanModel& model, const GraphSet& set) {
    if (model.link != LinkFunction::sigmoid) {
        throw InvalidConfig("predict_proba requires a sigmoid link");
    }
    return stable_sigmoid(forward(model, set));
}

double model_output(const SupermanModel& model, const GraphSet& set) {
    const double logit = forward(model, set);
    return model.link == LinkFunction::sigmoid ? stable_sigmoid(logit) : logit;
}

std::vector<double> predict_logits(const SupermanModel& model,
                                   const std::vector<const GraphSet*>& samples) {
    std::vector<double> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { out[i] = forward(model, *samples[i]); });
    return out;
}

std::vector<double> predict_probs(const SupermanModel& model,
                                  const std::vector<const GraphSet*>& samples) {
    std::vector<double> out = predict_logits(model, samples);
    for (double& x : out) x = stable_sigmoid(x);
    return out;
}

ModelVars bind_model(Tape& tape, const SupermanModel& model) {
    ModelVars vars;
    vars.model = &model;
    if (model.learn_output_bias) vars.output_bias = tape.param(model.output_bias);
    for (const SubsetModule& module : model.subsets) {
        SubsetVars sv;
        sv.encoder = bind_extgnan(tape, module.encoder);
        sv.has_mixer = module.mixer.has_value();
        sv.bypassed = module.mixer_bypassed;
        if (sv.has_mixer && !sv.bypassed) {
            sv.f = bind_mlp(tape, module.mixer->f);
            sv.g = bind_mlp(tape, module.mixer->g);
        }
        vars.subsets.push_back(std::move(sv));
    }
    return vars;
}

Var tape_forward(Tape& tape, const ModelVars& vars, const GraphSet& set, bool training,
                 Rng* rng) {
    const SupermanModel& model = *vars.model;
    const auto members = subset_members(model, set);
    Var logit = model.learn_output_bias ? tape.reshape(vars.output_bias, {1, 1})
                                        : tape.constant(Tensor({1, 1}, {model.bias()}));
    for (std::size_t si = 0; si < model.subsets.size(); ++si) {
        if (members[si].empty()) continue;
        const SubsetModule& module = model.subsets[si];
        const SubsetVars& sv = vars.subsets[si];
        std::vector<Var> reps;
        reps.reserve(members[si].size());
        SignalGraph storage;
        for (std::size_t gi : members[si]) {
            const SignalGraph& g = maybe_normalized(model, set.graphs[gi], storage);
            reps.push_back(tape_graph_representation(tape, sv.encoder, g, training, rng));
        }
        Var contrib;
        if (!sv.has_mixer) {
            contrib = tape.sum_all(reps.front());
        } else if (sv.bypassed) {
            Var pooled = reps.front();
            for (std::size_t k = 1; k < reps.size(); ++k) pooled = tape.add(pooled, reps[k]);
            pooled = tape.scale(pooled, 1.0 / static_cast<double>(reps.size()));
            contrib = tape.sum_all(pooled);
        } else {
            Var pooled;
            for (std::size_t k = 0; k < reps.size(); ++k) {
                Var fx = mlp_forward(tape, sv.f, reps[k], training, rng);
                pooled = k == 0 ? fx : tape.add(pooled, fx);
            }
            if (module.mixer->pooling == Pooling::mean) {
                pooled = tape.scale(pooled, 1.0 / static_cast<double>(reps.size()));
            }
            contrib = tape.sum_all(mlp_forward(tape, sv.g, pooled, training, rng));
        }
        logit = tape.add(logit, tape.reshape(contrib, {1, 1}));
    }
    return logit;
}

Var tape_batch_loss(Tape& tape, const ModelVars& vars, const std::vector<const GraphSet*>& batch,
                    bool training, Rng* rng) {
    if (batch.empty()) throw InvalidConfig("empty batch");
    std::vector<Var> logits;
    Tensor labels({batch.size()});
    logits.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        logits.push_back(tape_forward(tape, vars, *batch[i], training, rng));
        labels[i] = static_cast<double>(batch[i]->label);
    }
    Var row = logits.size() == 1 ? logits.front() : tape.concat_cols(logits);
    return tape.bce_with_logits(tape.reshape(row, {batch.size()}), std::move(labels));
}

nlohmann::json model_to_json(const SupermanModel& model) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["link"] = to_string(model.link);
    j["ablation"] = to_string(model.ablation);
    j["output_bias"] = model.bias();
    j["learn_output_bias"] = model.learn_output_bias;
    j["timestamp_unit"] = model.timestamp_unit;
    j["partition"] = nlohmann::ordered_json::array();
    for (const Subset& s : model.partition.subsets) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["signals"] = s.signal_types;
        js["collector"] = to_string(s.collector);
        j["partition"].push_back(std::move(js));
    }
    j["subsets"] = nlohmann::ordered_json::array();
    for (const SubsetModule& m : model.subsets) {
        nlohmann::ordered_json jm;
        jm["encoder"] = extgnan_to_json(m.encoder);
        jm["rep_dim"] = m.rep_dim;
        jm["mixer_bypassed"] = m.mixer_bypassed;
        if (m.mixer) {
            jm["mixer"] = {{"f", mlp_to_json(m.mixer->f)},
                           {"g", mlp_to_json(m.mixer->g)},
                           {"pooling", to_string(m.mixer->pooling)}};
        } else {
            jm["mixer"] = nullptr;
        }
        j["subsets"].push_back(std::move(jm));
    }
    j["normalization"] = nlohmann::ordered_json::object();
    for (const auto& [type, m] : model.normalization.per_signal) {
        j["normalization"][type] = {{"mean", m.mean}, {"stddev", m.stddev}};
    }
    return j;
}

SupermanModel model_from_json(const nlohmann::json& j) {
    SupermanModel model;
    model.link = link_from_string(j.at("link").get<std::string>());
    model.ablation = model_ablation_from_string(j.at("ablation").get<std::string>());
    model.output_bias = Tensor::scalar(j.at("output_bias").get<double>());
    model.learn_output_bias = j.value("learn_output_bias", true);
    model.timestamp_unit = j.value("timestamp_unit", std::string("days"));
    for (const auto& js : j.at("partition")) {
        Subset s;
        s.name = js.at("name").get<std::string>();
        s.signal_types = js.at("signals").get<std::vector<std::string>>();
        s.collector = collector_from_string(js.at("collector").get<std::string>());
        model.partition.subsets.push_back(std::move(s));
    }
    for (const auto& jm : j.at("subsets")) {
        SubsetModule m;
        m.encoder = extgnan_from_json(jm.at("encoder"));
        m.rep_dim = jm.at("rep_dim").get<std::size_t>();
        m.mixer_bypassed = jm.value("mixer_bypassed", false);
        if (!jm.at("mixer").is_null()) {
            DeepSetsParams mixer;
            mixer.f = mlp_from_json(jm.at("mixer").at("f"));
            mixer.g = mlp_from_json(jm.at("mixer").at("g"));
            mixer.pooling = pooling_from_string(jm.at("mixer").at("pooling").get<std::string>());
            mixer.validate(m.rep_dim);
            m.mixer = std::move(mixer);
        }
        model.subsets.push_back(std::move(m));
    }
    if (model.subsets.size() != model.partition.subsets.size()) {
        throw SchemaError("checkpoint subset count does not match partition");
    }
    if (j.contains("normalization")) {
        for (const auto& [type, jm] : j.at("normalization").items()) {
            FeatureStats::Moments m;
            m.mean = jm.at("mean").get<std::vector<double>>();
            m.stddev = jm.at("stddev").get<std::vector<double>>();
            model.normalization.per_signal[type] = std::move(m);
        }
    }
    return model;
}

void save_model(const SupermanModel& model, const std::string& path) {
    write_text_file(path, model_to_json(model).dump(2) + "\n");
}

SupermanModel load_model(const std::string& path) {
    try {
        return model_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace superman
