#include "superman/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "superman/hashing.hpp"
#include "superman/parallel.hpp"
#include "superman/treemetric.hpp"
#include "superman/xor_bench.hpp"

#include "nlohmann/json.hpp"

namespace superman {

namespace fs = std::filesystem;

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string resolve_out_dir(const std::string& explicit_out, const std::string& command) {
    if (!explicit_out.empty()) return explicit_out;
    const char* root = std::getenv("SUPERMAN_OUT_ROOT");
    const std::string base = root != nullptr ? root : "superman_out";
    return base + "/" + command;
}

ArtifactWriter::ArtifactWriter(std::string out_dir, std::string command)
    : out_dir_(std::move(out_dir)), command_(std::move(command)) {
    fs::create_directories(out_dir_);
}

void ArtifactWriter::set_config(const nlohmann::ordered_json& config) {
    config_dump_ = config.dump(2) + "\n";
    // Provenance first: the resolved configuration lands before any result.
    write("config.json", config_dump_);
}

void ArtifactWriter::set_seeds(const std::vector<std::uint64_t>& seeds) { seeds_ = seeds; }

void ArtifactWriter::write(const std::string& rel_path, const std::string& content) {
    const fs::path full = fs::path(out_dir_) / rel_path;
    if (full.has_parent_path()) fs::create_directories(full.parent_path());
    write_text_file(full.string(), content);
    artifacts_.emplace_back(rel_path, fnv1a64(content));
}

void ArtifactWriter::finish() {
    nlohmann::ordered_json manifest;
    manifest["command"] = command_;
    manifest["config_hash"] = to_hex(fnv1a64(config_dump_));
    manifest["seeds"] = seeds_;
    manifest["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& [path, hash] : artifacts_) {
        manifest["artifacts"].push_back({{"path", path}, {"fnv1a64", to_hex(hash)}});
    }
    write_text_file((fs::path(out_dir_) / "manifest.json").string(), manifest.dump(2) + "\n");
}

int cmd_ingest(const IngestOptions& options) {
    const IngestSchema schema = load_schema(options.schema_path);
    const Dataset dataset = ingest_csv(options.csv_path, schema, options.labels_path);

    ArtifactWriter out(resolve_out_dir(options.out_dir, "ingest"), "ingest");
    nlohmann::ordered_json config;
    config["csv"] = options.csv_path;
    config["schema"] = options.schema_path;
    config["labels"] = options.labels_path;
    out.set_config(config);

    out.write("dataset.json", dataset_to_json(dataset).dump(2) + "\n");

    std::size_t graphs = 0, nodes = 0;
    nlohmann::ordered_json per_signal = nlohmann::ordered_json::object();
    for (const GraphSet& s : dataset.samples) {
        graphs += s.graphs.size();
        for (const SignalGraph& g : s.graphs) {
            nodes += g.node_count();
            per_signal[g.signal_type] =
                per_signal.value(g.signal_type, 0) + static_cast<int>(g.node_count());
        }
    }
    nlohmann::ordered_json summary;
    summary["entities"] = dataset.samples.size();
    summary["graphs"] = graphs;
    summary["nodes"] = nodes;
    summary["nodes_per_signal"] = per_signal;
    out.write("summary.json", summary.dump(2) + "\n");
    out.finish();
    return 0;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.dataset_path = j.at("dataset").get<std::string>();
    if (j.contains("partition_file")) {
        cfg.partition = load_partition_config(j.at("partition_file").get<std::string>());
    } else {
        cfg.partition = partition_config_from_json(j.at("partition"));
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        cfg.train.epochs = t.value("epochs", cfg.train.epochs);
        cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        cfg.train.lr_max = t.value("lr_max", cfg.train.lr_max);
        cfg.train.lr_min = t.value("lr_min", cfg.train.lr_min);
        cfg.train.plateau_factor = t.value("plateau_factor", cfg.train.plateau_factor);
        cfg.train.plateau_patience = t.value("plateau_patience", cfg.train.plateau_patience);
        cfg.train.weight_decay = t.value("weight_decay", cfg.train.weight_decay);
        cfg.train.dropout = t.value("dropout", cfg.train.dropout);
        cfg.train.hidden = t.value("hidden", cfg.train.hidden);
        cfg.train.layers = t.value("layers", cfg.train.layers);
        cfg.train.upsample_minority = t.value("upsample_minority", cfg.train.upsample_minority);
    }
    cfg.activation = activation_from_string(j.value("activation", std::string("relu")));
    cfg.delta_mode = delta_mode_from_string(j.value("delta_mode", std::string("masked")));
    cfg.time_scale = j.value("time_scale", 1.0);
    cfg.ablation = model_ablation_from_string(j.value("ablation", std::string("none")));
    cfg.link = link_from_string(j.value("link", std::string("sigmoid")));
    cfg.learn_output_bias = j.value("learn_output_bias", true);
    cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    if (j.contains("split")) {
        cfg.split_train = j.at("split").value("train", 0.8);
        cfg.split_val = j.at("split").value("val", 0.1);
        cfg.split_seed = j.at("split").value("seed", std::uint64_t{17});
    }
    cfg.normalize = j.value("normalize_features", true);
    cfg.deterministic = j.value("deterministic", false);
    cfg.out_dir = j.value("out_dir", std::string{});
    return cfg;
}

nlohmann::ordered_json run_config_to_json(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["dataset"] = config.dataset_path;
    j["partition"] = partition_config_to_json(config.partition);
    j["train"] = {{"epochs", config.train.epochs},
                  {"batch_size", config.train.batch_size},
                  {"lr_max", config.train.lr_max},
                  {"lr_min", config.train.lr_min},
                  {"plateau_factor", config.train.plateau_factor},
                  {"plateau_patience", config.train.plateau_patience},
                  {"weight_decay", config.train.weight_decay},
                  {"dropout", config.train.dropout},
                  {"hidden", config.train.hidden},
                  {"layers", config.train.layers},
                  {"upsample_minority", config.train.upsample_minority}};
    j["activation"] = to_string(config.activation);
    j["delta_mode"] = to_string(config.delta_mode);
    j["time_scale"] = config.time_scale;
    j["ablation"] = to_string(config.ablation);
    j["link"] = to_string(config.link);
    j["learn_output_bias"] = config.learn_output_bias;
    j["seeds"] = config.seeds;
    j["split"] = {{"train", config.split_train},
                  {"val", config.split_val},
                  {"seed", config.split_seed}};
    j["normalize_features"] = config.normalize;
    j["deterministic"] = config.deterministic;
    j["out_dir"] = config.out_dir;
    return j;
}

RunConfig load_run_config(const std::string& path) {
    try {
        return run_config_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

ModelConfig model_config_of(const RunConfig& config) {
    ModelConfig mc;
    mc.hidden = config.train.hidden;
    mc.layers = config.train.layers;
    mc.activation = config.activation;
    mc.dropout = config.train.dropout;
    mc.delta_mode = config.delta_mode;
    mc.delta_policy = config.partition.delta_policy;
    mc.window = config.partition.window;
    mc.time_scale = config.time_scale;
    mc.ablation = config.ablation;
    mc.link = config.link;
    mc.learn_output_bias = config.learn_output_bias;
    return mc;
}

namespace {

std::map<std::string, std::size_t> dataset_feature_dims(const Dataset& dataset) {
    std::map<std::string, std::size_t> dims;
    for (const GraphSet& s : dataset.samples) {
        for (const SignalGraph& g : s.graphs) dims[g.signal_type] = g.feature_dim();
    }
    return dims;
}

struct SeedOutcome {
    std::uint64_t seed = 0;
    EvalReport test;
    std::size_t best_epoch = 0;
    bool diverged = false;
};

nlohmann::ordered_json mean_std_json(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - m) * (x - m);
    const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    return {{"mean", m}, {"std", sd}};
}

// Shared by train and ablate: one full multi-seed run on a prepared dataset.
struct MultiSeedResult {
    std::vector<SeedOutcome> outcomes;
    std::vector<TrainResult> results;
};

MultiSeedResult run_seeds(const RunConfig& config, const Dataset& dataset,
                          const SplitIndices& split, ModelAblation ablation) {
    const auto dims = dataset_feature_dims(dataset);
    FeatureStats stats;
    if (config.normalize) {
        std::vector<const GraphSet*> train_view;
        for (std::size_t i : split.train) train_view.push_back(&dataset.samples[i]);
        stats = compute_feature_stats(dataset.samples, train_view);
    }

    MultiSeedResult multi;
    for (std::uint64_t seed : config.seeds) {
        ModelConfig mc = model_config_of(config);
        mc.ablation = ablation;
        SupermanModel model =
            build_model(config.partition.partition, config.partition.feature_groups, dims, mc,
                        seed);
        model.normalization = stats;
        model.timestamp_unit = dataset.timestamp_unit;

        TrainConfig tc = config.train;
        tc.seed = seed;
        TrainResult result = train(model, dataset, split, tc);

        SeedOutcome outcome;
        outcome.seed = seed;
        outcome.best_epoch = result.best_epoch;
        outcome.diverged = result.diverged;
        if (!split.test.empty()) outcome.test = evaluate(result.model, dataset, split.test);
        multi.outcomes.push_back(outcome);
        multi.results.push_back(std::move(result));
    }
    return multi;
}

nlohmann::ordered_json metrics_summary(const std::vector<SeedOutcome>& outcomes) {
    nlohmann::ordered_json j;
    std::vector<double> auprcs, aurocs, accs, eces;
    j["per_seed"] = nlohmann::ordered_json::array();
    for (const SeedOutcome& o : outcomes) {
        auprcs.push_back(o.test.auprc);
        aurocs.push_back(o.test.auroc);
        accs.push_back(o.test.accuracy);
        eces.push_back(o.test.ece);
        j["per_seed"].push_back({{"seed", o.seed},
                                 {"auprc", o.test.auprc},
                                 {"auroc", o.test.auroc},
                                 {"accuracy", o.test.accuracy},
                                 {"ece", o.test.ece},
                                 {"best_epoch", o.best_epoch},
                                 {"diverged", o.diverged}});
    }
    j["auprc"] = mean_std_json(auprcs);
    j["auroc"] = mean_std_json(aurocs);
    j["accuracy"] = mean_std_json(accs);
    j["ece"] = mean_std_json(eces);
    return j;
}

} // namespace

int cmd_train(const RunConfig& config) {
    if (config.seeds.empty()) throw ConfigError("at least one seed is required");
    config.train.validate();
    ScopedExecMode mode(config.deterministic ? ExecMode::serial : execution_mode());

    const Dataset dataset = load_dataset(config.dataset_path);
    ArtifactWriter out(resolve_out_dir(config.out_dir, "train"), "train");
    out.set_config(run_config_to_json(config));
    out.set_seeds(config.seeds);

    const SplitIndices split = split_dataset(dataset.samples.size(), config.split_train,
                                             config.split_val, config.split_seed);
    MultiSeedResult multi = run_seeds(config, dataset, split, config.ablation);

    bool any_diverged = false;
    for (std::size_t k = 0; k < multi.results.size(); ++k) {
        const std::uint64_t seed = config.seeds[k];
        out.write("history_seed" + std::to_string(seed) + ".csv",
                  history_to_csv(multi.results[k].history));
        out.write("checkpoint_seed" + std::to_string(seed) + ".json",
                  model_to_json(multi.results[k].model).dump(2) + "\n");
        any_diverged = any_diverged || multi.results[k].diverged;
    }
    out.write("metrics.json", metrics_summary(multi.outcomes).dump(2) + "\n");
    out.finish();
    if (any_diverged) throw NumericalError("training diverged on at least one seed");
    return 0;
}

int cmd_eval(const EvalOptions& options) {
    ScopedExecMode mode(options.deterministic ? ExecMode::serial : execution_mode());
    const SupermanModel model = load_model(options.checkpoint_path);
    const Dataset dataset = load_dataset(options.dataset_path);

    std::vector<std::size_t> indices(dataset.samples.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    const EvalReport report = evaluate(model, dataset, indices);

    std::vector<const GraphSet*> samples;
    std::vector<int> labels;
    for (const GraphSet& s : dataset.samples) {
        samples.push_back(&s);
        labels.push_back(s.label);
    }
    const std::vector<double> probs = predict_probs(model, samples);

    ArtifactWriter out(resolve_out_dir(options.out_dir, "eval"), "eval");
    nlohmann::ordered_json config;
    config["checkpoint"] = options.checkpoint_path;
    config["dataset"] = options.dataset_path;
    out.set_config(config);
    nlohmann::ordered_json metrics;
    metrics["auprc"] = report.auprc;
    metrics["auroc"] = report.auroc;
    metrics["accuracy"] = report.accuracy;
    metrics["ece"] = report.ece;
    metrics["loss"] = report.loss;
    metrics["samples"] = dataset.samples.size();
    out.write("metrics.json", metrics.dump(2) + "\n");
    out.write("reliability.csv", reliability_to_csv(reliability_diagram(probs, labels)));
    out.finish();
    return 0;
}

int cmd_explain(const ExplainOptions& options) {
    ScopedExecMode mode(options.deterministic ? ExecMode::serial : execution_mode());
    const SupermanModel model = load_model(options.checkpoint_path);
    const Dataset dataset = load_dataset(options.dataset_path);

    ArtifactWriter out(resolve_out_dir(options.out_dir, "explain"), "explain");
    nlohmann::ordered_json config;
    config["checkpoint"] = options.checkpoint_path;
    config["dataset"] = options.dataset_path;
    config["targets"] = options.targets;
    config["noise_levels"] = options.noise_levels;
    out.set_config(config);

    const std::size_t limit = options.max_samples == 0
                                  ? dataset.samples.size()
                                  : std::min(options.max_samples, dataset.samples.size());
    std::vector<ContributionReport> reports(limit);
    parallel_for(limit, [&](std::size_t i) {
        reports[i] = contribution_report(model, dataset.samples[i]);
    });

    nlohmann::ordered_json jreports = nlohmann::ordered_json::array();
    for (const ContributionReport& r : reports) {
        nlohmann::ordered_json jr;
        jr["entity_id"] = r.entity_id;
        jr["logit"] = r.logit;
        jr["output_bias"] = r.output_bias;
        jr["reconstruction_residual"] = r.reconstruction_residual;
        jr["subsets"] = nlohmann::ordered_json::array();
        for (std::size_t si = 0; si < r.subset_contributions.size(); ++si) {
            jr["subsets"].push_back({{"name", model.partition.subsets[si].name},
                                     {"contribution", r.subset_contributions[si]}});
        }
        jr["graphs"] = nlohmann::ordered_json::array();
        for (const auto& g : r.graphs) {
            nlohmann::ordered_json jg;
            jg["signal_type"] = g.signal_type;
            jg["subset_index"] = g.subset_index;
            jg["node_attributable"] = g.node_attributable;
            if (g.node_attributable) {
                jg["contribution"] = g.contribution;
                jg["node_contributions"] = g.node_contributions;
                jg["node_timestamps"] = g.node_timestamps;
            }
            jr["graphs"].push_back(std::move(jg));
        }
        jreports.push_back(std::move(jr));
    }
    out.write("contributions.json", jreports.dump(2) + "\n");
    out.write("contributions.csv", contributions_to_csv(model, reports));

    std::vector<double> levels = options.noise_levels;
    if (levels.empty()) levels = {0.0, 0.5, 1.0, 1.5, 2.0};
    for (std::size_t si = 0; si < model.partition.subsets.size(); ++si) {
        const std::string& name = model.partition.subsets[si].name;
        if (!options.targets.empty() &&
            std::find(options.targets.begin(), options.targets.end(), name) ==
                options.targets.end()) {
            continue;
        }
        const PerturbationCurve curve = pca_perturbation_curve(model, dataset, si, levels);
        out.write("perturbation_" + name + ".csv", perturbation_to_csv(curve));
    }
    out.finish();
    return 0;
}

int cmd_robustness(const RobustnessOptions& options) {
    ScopedExecMode mode(options.deterministic ? ExecMode::serial : execution_mode());
    const SupermanModel model = load_model(options.checkpoint_path);
    const Dataset dataset = load_dataset(options.dataset_path);
    nlohmann::json spec_json;
    try {
        spec_json = nlohmann::json::parse(read_text_file(options.spec_path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(options.spec_path + ": " + e.what());
    }

    ArtifactWriter out(resolve_out_dir(options.out_dir, "robustness"), "robustness");
    nlohmann::ordered_json config;
    config["checkpoint"] = options.checkpoint_path;
    config["dataset"] = options.dataset_path;
    config["spec"] = spec_json;
    out.set_config(config);

    std::vector<std::size_t> indices(dataset.samples.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    const std::uint64_t seed = spec_json.value("seed", std::uint64_t{0});
    const std::size_t n_seeds = spec_json.value("n_seeds", std::size_t{5});

    for (const std::string kind : {"additive", "multiplicative", "temporal"}) {
        if (!spec_json.contains(kind)) continue;
        NoiseSpec spec;
        spec.kind = noise_kind_from_string(kind);
        spec.sigmas = spec_json.at(kind).get<std::vector<double>>();
        spec.n_seeds = n_seeds;
        const auto rows = noise_robustness(model, dataset, indices, spec, seed);
        out.write("robustness_" + kind + ".csv", robustness_to_csv(rows));
    }
    out.finish();
    return 0;
}

int cmd_treemetric(const TreemetricOptions& options) {
    const DistanceMatrix d = distance_matrix_from_csv(options.matrix_path);
    ArtifactWriter out(resolve_out_dir(options.out_dir, "treemetric"), "treemetric");
    nlohmann::ordered_json config;
    config["matrix"] = options.matrix_path;
    config["mode"] = options.mode;
    config["tol"] = options.tol;
    out.set_config(config);

    if (options.mode == "check") {
        const FourPointResult result = four_point_check(d, options.tol);
        nlohmann::ordered_json verdict;
        verdict["four_point"] = result.holds;
        if (!result.holds) {
            verdict["violation"] = {result.violation[0], result.violation[1], result.violation[2],
                                    result.violation[3]};
        }
        out.write("verdict.json", verdict.dump(2) + "\n");
        out.finish();
        return 0;
    }
    if (options.mode == "reconstruct") {
        const WeightedPath path = reconstruct_path(d, options.tol);
        nlohmann::ordered_json jp;
        jp["order"] = path.order;
        jp["weights"] = path.weights;
        out.write("path.json", jp.dump(2) + "\n");
        out.finish();
        return 0;
    }
    throw InvalidConfig("mode must be check or reconstruct");
}

int cmd_xor_bench(const XorBenchOptions& options) {
    if (options.task != "feature" && options.task != "set") {
        throw InvalidConfig("task must be feature or set");
    }
    if (options.n_seeds == 0) throw ConfigError("at least one seed is required");
    ArtifactWriter out(resolve_out_dir(options.out_dir, "xor_bench"), "xor_bench");
    nlohmann::ordered_json config;
    config["task"] = options.task;
    config["grouped"] = options.grouped;
    config["n_seeds"] = options.n_seeds;
    config["max_steps"] = options.max_steps;
    out.set_config(config);

    XorTrainSettings settings =
        options.task == "feature" ? feature_xor_settings() : set_xor_settings();
    if (options.max_steps != 0) settings.max_steps = options.max_steps;

    std::ostringstream table;
    table << "task,mode,seed,reached_perfect,steps_to_perfect,best_accuracy\n";
    std::size_t solved = 0;
    double max_best = 0.0;
    for (std::uint64_t seed = 0; seed < options.n_seeds; ++seed) {
        const XorTrainOutcome outcome =
            options.task == "feature" ? train_feature_xor(options.grouped, seed, settings)
                                      : train_set_xor(options.grouped, seed, settings);
        solved += static_cast<std::size_t>(outcome.reached_perfect);
        max_best = std::max(max_best, outcome.best_accuracy);
        table << options.task << ',' << (options.grouped ? "grouped" : "singleton") << ','
              << seed << ',' << (outcome.reached_perfect ? 1 : 0) << ','
              << outcome.steps_to_perfect << ',' << outcome.best_accuracy << '\n';
    }
    out.write("accuracy_table.csv", table.str());

    nlohmann::ordered_json summary;
    summary["task"] = options.task;
    summary["mode"] = options.grouped ? "grouped" : "singleton";
    summary["solved_seeds"] = solved;
    summary["n_seeds"] = options.n_seeds;
    summary["max_best_accuracy"] = max_best;
    summary["threshold_system_infeasible"] = options.task == "feature"
                                                 ? feature_xor_thresholds_infeasible()
                                                 : set_xor_thresholds_infeasible();
    if (options.task == "set") {
        summary["hardcoded_outputs"] = hardcoded_set_xor_outputs();
    }
    out.write("summary.json", summary.dump(2) + "\n");
    out.finish();
    return 0;
}

int cmd_ablate(const AblateOptions& options) {
    if (options.base.seeds.empty()) throw ConfigError("at least one seed is required");
    options.base.train.validate();
    ScopedExecMode mode(options.base.deterministic ? ExecMode::serial : execution_mode());

    const Dataset dataset = load_dataset(options.base.dataset_path);
    ArtifactWriter out(resolve_out_dir(options.base.out_dir, "ablate"), "ablate");
    nlohmann::ordered_json config = run_config_to_json(options.base);
    config["variants"] = options.variants;
    out.set_config(config);
    out.set_seeds(options.base.seeds);

    const SplitIndices split = split_dataset(dataset.samples.size(), options.base.split_train,
                                             options.base.split_val, options.base.split_seed);

    auto mean_auprc = [](const std::vector<SeedOutcome>& outcomes) {
        double m = 0.0;
        for (const SeedOutcome& o : outcomes) m += o.test.auprc;
        return m / static_cast<double>(outcomes.size());
    };
    auto std_auprc = [&](const std::vector<SeedOutcome>& outcomes, double m) {
        if (outcomes.size() < 2) return 0.0;
        double var = 0.0;
        for (const SeedOutcome& o : outcomes) var += (o.test.auprc - m) * (o.test.auprc - m);
        return std::sqrt(var / static_cast<double>(outcomes.size() - 1));
    };

    const MultiSeedResult baseline = run_seeds(options.base, dataset, split, ModelAblation::none);
    const double base_mean = mean_auprc(baseline.outcomes);

    std::ostringstream table;
    table << "variant,mean_auprc,std_auprc,drop_pct\n";
    table.precision(17);
    table << "none," << base_mean << ',' << std_auprc(baseline.outcomes, base_mean) << ",0\n";
    nlohmann::ordered_json summary;
    summary["none"] = {{"mean_auprc", base_mean},
                       {"std_auprc", std_auprc(baseline.outcomes, base_mean)},
                       {"drop_pct", 0.0}};
    for (const std::string& name : options.variants) {
        const ModelAblation ablation = model_ablation_from_string(name);
        if (ablation == ModelAblation::none) continue;
        const MultiSeedResult variant = run_seeds(options.base, dataset, split, ablation);
        const double m = mean_auprc(variant.outcomes);
        const double drop = 100.0 * (m - base_mean) / base_mean;
        table << to_string(ablation) << ',' << m << ',' << std_auprc(variant.outcomes, m) << ','
              << drop << '\n';
        summary[to_string(ablation)] = {{"mean_auprc", m},
                                        {"std_auprc", std_auprc(variant.outcomes, m)},
                                        {"drop_pct", drop}};
    }
    out.write("ablation_table.csv", table.str());
    out.write("ablation_summary.json", summary.dump(2) + "\n");
    out.finish();
    return 0;
}

int cmd_synth(const SynthOptions& options) {
    ArtifactWriter out(resolve_out_dir(options.out_dir, "synth"), "synth");
    nlohmann::ordered_json config;
    config["kind"] = options.kind;
    config["n"] = options.n;
    config["seed"] = options.seed;
    config["gap_coeff"] = options.gap_coeff;
    out.set_config(config);

    Dataset dataset;
    nlohmann::ordered_json meta;
    if (options.kind == "feature_xor") {
        dataset = feature_xor_dataset(options.n);
        meta["partition_grouped"] = partition_config_to_json(feature_xor_partition(true));
        meta["partition_singleton"] = partition_config_to_json(feature_xor_partition(false));
    } else if (options.kind == "set_xor") {
        dataset = set_xor_dataset(options.n);
        meta["partition_paired"] = partition_config_to_json(set_xor_partition(true));
        meta["partition_singleton"] = partition_config_to_json(set_xor_partition(false));
    } else if (options.kind == "irregular_signal") {
        IrregularSignalSpec spec;
        spec.n_entities = options.n;
        spec.seed = options.seed;
        spec.gap_coeff = options.gap_coeff;
        IrregularSignalMeta m;
        dataset = irregular_signal_dataset(spec, &m);
        meta["bayes_accuracy"] = m.bayes_accuracy;
        meta["positive_rate"] = m.positive_rate;
        meta["content_hash"] = to_hex(m.content_hash);
        meta["rule"] = m.rule;
        meta["partition"] = partition_config_to_json(irregular_signal_partition());
    } else {
        throw InvalidConfig("kind must be feature_xor, set_xor, or irregular_signal");
    }
    out.write("dataset.json", dataset_to_json(dataset).dump(2) + "\n");
    out.write("dataset.csv", dataset_to_csv(dataset));
    out.write("meta.json", meta.dump(2) + "\n");
    out.finish();
    return 0;
}

} // namespace superman
