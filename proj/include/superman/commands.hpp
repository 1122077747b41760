#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "superman/dataset_io.hpp"
#include "superman/interpret.hpp"
#include "superman/model.hpp"
#include "superman/training.hpp"

#include "nlohmann/json_fwd.hpp"

namespace superman {

// Resolves an output directory: explicit --out wins, otherwise
// $SUPERMAN_OUT_ROOT/<command> (falling back to ./superman_out/<command>).
std::string resolve_out_dir(const std::string& explicit_out, const std::string& command);

// Collects artifacts under one output directory and finishes with a manifest
// (config hash, seed list, per-file checksums). Nothing is written outside
// the directory.
class ArtifactWriter {
public:
    ArtifactWriter(std::string out_dir, std::string command);

    const std::string& out_dir() const { return out_dir_; }
    void set_config(const nlohmann::ordered_json& config);
    void set_seeds(const std::vector<std::uint64_t>& seeds);
    void write(const std::string& rel_path, const std::string& content);
    void finish();

private:
    std::string out_dir_;
    std::string command_;
    std::string config_dump_;
    std::vector<std::uint64_t> seeds_;
    std::vector<std::pair<std::string, std::uint64_t>> artifacts_; // path, fnv1a64
};

struct IngestOptions {
    std::string csv_path;
    std::string schema_path;
    std::string labels_path;
    std::string out_dir;
};
int cmd_ingest(const IngestOptions& options);

// Run configuration shared by train / ablate. Mirrors the JSON config file.
struct RunConfig {
    std::string dataset_path;
    PartitionConfig partition;
    TrainConfig train;
    Activation activation = Activation::relu;
    DeltaMode delta_mode = DeltaMode::masked;
    double time_scale = 1.0;
    ModelAblation ablation = ModelAblation::none;
    LinkFunction link = LinkFunction::sigmoid;
    bool learn_output_bias = true;
    std::vector<std::uint64_t> seeds;
    double split_train = 0.8;
    double split_val = 0.1;
    std::uint64_t split_seed = 17;
    bool normalize = true;
    bool deterministic = false;
    std::string out_dir;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::string& path);

ModelConfig model_config_of(const RunConfig& config);

struct TrainArtifacts {
    std::vector<double> auprc_per_seed;
    std::string metrics_json;
};
int cmd_train(const RunConfig& config);

struct EvalOptions {
    std::string checkpoint_path;
    std::string dataset_path;
    std::string out_dir;
    bool deterministic = false;
};
int cmd_eval(const EvalOptions& options);

struct ExplainOptions {
    std::string checkpoint_path;
    std::string dataset_path;
    std::vector<std::string> targets; // subset names; empty means all
    std::vector<double> noise_levels;
    std::size_t max_samples = 0; // 0 = all
    std::string out_dir;
    bool deterministic = false;
};
int cmd_explain(const ExplainOptions& options);

struct RobustnessOptions {
    std::string checkpoint_path;
    std::string dataset_path;
    std::string spec_path; // JSON: {"additive": [...], "multiplicative": [...],
                           //        "temporal": [...], "n_seeds": 5, "seed": 0}
    std::string out_dir;
    bool deterministic = false;
};
int cmd_robustness(const RobustnessOptions& options);

struct TreemetricOptions {
    std::string matrix_path;
    std::string mode = "check"; // check | reconstruct
    double tol = 1e-9;
    std::string out_dir;
};
int cmd_treemetric(const TreemetricOptions& options);

struct XorBenchOptions {
    std::string task = "feature"; // feature | set
    bool grouped = true;          // paired partition for the set task
    std::size_t n_seeds = 20;
    std::size_t max_steps = 0; // 0 = task default
    std::string out_dir;
};
int cmd_xor_bench(const XorBenchOptions& options);

struct AblateOptions {
    RunConfig base;
    std::vector<std::string> variants; // names accepted by the ablation parser
};
int cmd_ablate(const AblateOptions& options);

struct SynthOptions {
    std::string kind = "irregular_signal"; // feature_xor | set_xor | irregular_signal
    std::size_t n = 100;
    std::uint64_t seed = 0;
    double gap_coeff = 2.0;
    std::string out_dir;
};
int cmd_synth(const SynthOptions& options);

} // namespace superman
