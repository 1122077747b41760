#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "superman/commands.hpp"
#include "superman/errors.hpp"
#include "superman/parallel.hpp"

namespace {

int dispatch(int argc, char** argv) {
    CLI::App app{"SuperMAN: additive models over sets of irregular signal graphs"};
    app.require_subcommand(1);

    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "force single-threaded execution for reproducible runs");

    superman::IngestOptions ingest;
    CLI::App* c_ingest = app.add_subcommand("ingest", "CSV measurements to canonical dataset");
    c_ingest->add_option("--csv", ingest.csv_path, "measurement CSV")->required();
    c_ingest->add_option("--schema", ingest.schema_path, "schema JSON")->required();
    c_ingest->add_option("--labels", ingest.labels_path, "sidecar label CSV");
    c_ingest->add_option("--out", ingest.out_dir, "output directory");

    std::string train_config_path;
    CLI::App* c_train = app.add_subcommand("train", "train over the configured seeds");
    c_train->add_option("--config", train_config_path, "run config JSON")->required();
    std::string train_out_override;
    c_train->add_option("--out", train_out_override, "output directory");
    std::string train_ablation;
    c_train->add_option("--ablation", train_ablation,
                        "none|rho1|mean_pool|node_mlp|identity|gnan (overrides the config)");

    superman::EvalOptions eval_opts;
    CLI::App* c_eval = app.add_subcommand("eval", "metrics and reliability diagram");
    c_eval->add_option("--checkpoint", eval_opts.checkpoint_path)->required();
    c_eval->add_option("--dataset", eval_opts.dataset_path)->required();
    c_eval->add_option("--out", eval_opts.out_dir);

    superman::ExplainOptions explain_opts;
    CLI::App* c_explain = app.add_subcommand("explain", "contributions and perturbation curves");
    c_explain->add_option("--checkpoint", explain_opts.checkpoint_path)->required();
    c_explain->add_option("--dataset", explain_opts.dataset_path)->required();
    c_explain->add_option("--targets", explain_opts.targets, "subset names (default: all)");
    c_explain->add_option("--levels", explain_opts.noise_levels, "perturbation levels");
    c_explain->add_option("--max-samples", explain_opts.max_samples);
    c_explain->add_option("--out", explain_opts.out_dir);

    superman::RobustnessOptions robust_opts;
    CLI::App* c_robust = app.add_subcommand("robustness", "test-time noise sensitivity tables");
    c_robust->add_option("--checkpoint", robust_opts.checkpoint_path)->required();
    c_robust->add_option("--dataset", robust_opts.dataset_path)->required();
    c_robust->add_option("--spec", robust_opts.spec_path, "noise spec JSON")->required();
    c_robust->add_option("--out", robust_opts.out_dir);

    superman::TreemetricOptions tree_opts;
    CLI::App* c_tree = app.add_subcommand("treemetric", "four-point check / path reconstruction");
    c_tree->add_option("--matrix", tree_opts.matrix_path, "distance matrix CSV")->required();
    c_tree->add_option("--mode", tree_opts.mode, "check | reconstruct");
    c_tree->add_option("--tol", tree_opts.tol);
    c_tree->add_option("--out", tree_opts.out_dir);

    superman::XorBenchOptions xor_opts;
    CLI::App* c_xor = app.add_subcommand("xor-bench", "expressivity separation experiments");
    c_xor->add_option("--task", xor_opts.task, "feature | set");
    c_xor->add_flag("--grouped,!--singleton", xor_opts.grouped,
                    "grouped features / paired partition (default) vs singletons");
    c_xor->add_option("--seeds", xor_opts.n_seeds);
    c_xor->add_option("--max-steps", xor_opts.max_steps);
    c_xor->add_option("--out", xor_opts.out_dir);

    std::string ablate_config_path;
    std::vector<std::string> ablate_variants;
    CLI::App* c_ablate = app.add_subcommand("ablate", "retrain with components switched off");
    c_ablate->add_option("--config", ablate_config_path, "run config JSON")->required();
    c_ablate
        ->add_option("--variants", ablate_variants,
                     "subset of {rho1,mean_pool,node_mlp,identity,gnan}")
        ->required();
    std::string ablate_out_override;
    c_ablate->add_option("--out", ablate_out_override);

    superman::SynthOptions synth_opts;
    CLI::App* c_synth = app.add_subcommand("synth", "generate synthetic datasets");
    c_synth->add_option("--kind", synth_opts.kind, "feature_xor | set_xor | irregular_signal");
    c_synth->add_option("--n", synth_opts.n, "replicas / entities");
    c_synth->add_option("--seed", synth_opts.seed);
    c_synth->add_option("--gap-coeff", synth_opts.gap_coeff);
    c_synth->add_option("--out", synth_opts.out_dir);

    for (CLI::App* sub : app.get_subcommands(static_cast<bool (*)(const CLI::App*)>(nullptr))) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    if (deterministic) superman::set_execution_mode(superman::ExecMode::serial);

    if (c_ingest->parsed()) return superman::cmd_ingest(ingest);
    if (c_train->parsed()) {
        superman::RunConfig config = superman::load_run_config(train_config_path);
        if (!train_out_override.empty()) config.out_dir = train_out_override;
        if (!train_ablation.empty()) {
            config.ablation = superman::model_ablation_from_string(train_ablation);
        }
        if (deterministic) config.deterministic = true;
        return superman::cmd_train(config);
    }
    if (c_eval->parsed()) {
        eval_opts.deterministic = deterministic;
        return superman::cmd_eval(eval_opts);
    }
    if (c_explain->parsed()) {
        explain_opts.deterministic = deterministic;
        return superman::cmd_explain(explain_opts);
    }
    if (c_robust->parsed()) {
        robust_opts.deterministic = deterministic;
        return superman::cmd_robustness(robust_opts);
    }
    if (c_tree->parsed()) return superman::cmd_treemetric(tree_opts);
    if (c_xor->parsed()) return superman::cmd_xor_bench(xor_opts);
    if (c_ablate->parsed()) {
        superman::AblateOptions options;
        options.base = superman::load_run_config(ablate_config_path);
        if (!ablate_out_override.empty()) options.base.out_dir = ablate_out_override;
        if (deterministic) options.base.deterministic = true;
        options.variants = ablate_variants;
        return superman::cmd_ablate(options);
    }
    if (c_synth->parsed()) return superman::cmd_synth(synth_opts);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const superman::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
