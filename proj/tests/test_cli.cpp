#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "superman/dataset_io.hpp"
#include "superman/treemetric.hpp"

#include "nlohmann/json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = SUPERMAN_BIN;

struct CliRun {
    int exit_code = 0;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WEXITSTATUS(status);
    return r;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "superman_cli_tests";
    fs::create_directories(dir);
    return dir;
}

nlohmann::json read_json(const fs::path& p) {
    return nlohmann::json::parse(superman::read_text_file(p.string()));
}

} // namespace

TEST_CASE("cli pipeline: synth, train, eval, explain, robustness") {
    const fs::path dir = work_dir() / "pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);

    REQUIRE(run_cli("synth --kind irregular_signal --n 60 --seed 5 --out " +
                    (dir / "data").string())
                .exit_code == 0);
    REQUIRE(fs::exists(dir / "data" / "dataset.json"));
    REQUIRE(fs::exists(dir / "data" / "dataset.csv"));
    REQUIRE(fs::exists(dir / "data" / "manifest.json"));

    const nlohmann::json meta = read_json(dir / "data" / "meta.json");
    nlohmann::json run;
    run["dataset"] = (dir / "data" / "dataset.json").string();
    run["partition"] = meta.at("partition");
    run["train"] = {{"epochs", 3},  {"batch_size", 16}, {"lr_max", 3e-3}, {"dropout", 0.1},
                    {"hidden", 32}, {"layers", 3}};
    run["seeds"] = {0};
    run["split"] = {{"train", 0.7}, {"val", 0.15}, {"seed", 3}};
    std::ofstream(dir / "run.json") << run.dump(2);

    REQUIRE(run_cli("train --config " + (dir / "run.json").string() + " --out " +
                    (dir / "train").string())
                .exit_code == 0);
    REQUIRE(fs::exists(dir / "train" / "checkpoint_seed0.json"));
    REQUIRE(fs::exists(dir / "train" / "history_seed0.csv"));
    const nlohmann::json metrics = read_json(dir / "train" / "metrics.json");
    CHECK(metrics.at("per_seed").size() == 1);

    // The manifest lists exactly the artifacts the command wrote.
    const nlohmann::json manifest = read_json(dir / "train" / "manifest.json");
    std::size_t found = 0;
    for (const auto& a : manifest.at("artifacts")) {
        CHECK(fs::exists(dir / "train" / a.at("path").get<std::string>()));
        ++found;
    }
    CHECK(found >= 3);

    const std::string ckpt = (dir / "train" / "checkpoint_seed0.json").string();
    const std::string data = (dir / "data" / "dataset.json").string();
    REQUIRE(run_cli("eval --checkpoint " + ckpt + " --dataset " + data + " --out " +
                    (dir / "eval").string())
                .exit_code == 0);
    REQUIRE(fs::exists(dir / "eval" / "reliability.csv"));

    REQUIRE(run_cli("explain --checkpoint " + ckpt + " --dataset " + data +
                    " --max-samples 4 --targets trend --out " + (dir / "explain").string())
                .exit_code == 0);
    REQUIRE(fs::exists(dir / "explain" / "contributions.csv"));
    REQUIRE(fs::exists(dir / "explain" / "perturbation_trend.csv"));
    CHECK_FALSE(fs::exists(dir / "explain" / "perturbation_gaps.csv"));

    std::ofstream(dir / "noise.json") << R"({"additive": [0.0, 0.5], "n_seeds": 2, "seed": 1})";
    REQUIRE(run_cli("robustness --checkpoint " + ckpt + " --dataset " + data + " --spec " +
                    (dir / "noise.json").string() + " --out " + (dir / "robust").string())
                .exit_code == 0);
    REQUIRE(fs::exists(dir / "robust" / "robustness_additive.csv"));

    REQUIRE(run_cli("ablate --config " + (dir / "run.json").string() +
                    " --variants rho1 --out " + (dir / "ablate").string())
                .exit_code == 0);
    const std::string table =
        superman::read_text_file((dir / "ablate" / "ablation_table.csv").string());
    CHECK(table.find("variant,mean_auprc,std_auprc,drop_pct\n") == 0);
    CHECK(table.find("none,") != std::string::npos);
    CHECK(table.find("rho_const_one,") != std::string::npos);
}

TEST_CASE("cli treemetric check and reconstruct") {
    const fs::path dir = work_dir() / "tree";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const superman::DistanceMatrix d = superman::path_distance_matrix({1.0, 2.0, 0.5});
    std::ofstream(dir / "m.csv") << superman::distance_matrix_to_csv(d);

    REQUIRE(run_cli("treemetric --matrix " + (dir / "m.csv").string() + " --mode check --out " +
                    (dir / "check").string())
                .exit_code == 0);
    CHECK(read_json(dir / "check" / "verdict.json").at("four_point").get<bool>());

    REQUIRE(run_cli("treemetric --matrix " + (dir / "m.csv").string() +
                    " --mode reconstruct --out " + (dir / "rec").string())
                .exit_code == 0);
    const nlohmann::json path = read_json(dir / "rec" / "path.json");
    CHECK(path.at("weights").size() == 3);
}

TEST_CASE("cli xor bench emits the accuracy table") {
    const fs::path dir = work_dir() / "xor";
    fs::remove_all(dir);
    REQUIRE(run_cli("xor-bench --task feature --grouped --seeds 3 --out " + dir.string())
                .exit_code == 0);
    const nlohmann::json summary = read_json(dir / "summary.json");
    CHECK(summary.at("solved_seeds").get<int>() == 3);
    CHECK(summary.at("threshold_system_infeasible").get<bool>());
    REQUIRE(fs::exists(dir / "accuracy_table.csv"));
}

TEST_CASE("cli exit codes distinguish config and data errors") {
    const fs::path dir = work_dir() / "errors";
    fs::remove_all(dir);
    fs::create_directories(dir);

    // No seeds listed -> config error (2) before the dataset is touched.
    nlohmann::json subset;
    subset["name"] = "x";
    subset["signals"] = {"a"};
    nlohmann::json run;
    run["dataset"] = (dir / "missing.json").string();
    run["partition"]["subsets"] = {subset};
    std::ofstream(dir / "bad_data.json") << run.dump();
    CHECK(run_cli("train --config " + (dir / "bad_data.json").string() + " --out " +
                  (dir / "o1").string())
              .exit_code == 2);

    // Missing dataset file -> data error (3).
    nlohmann::json run2;
    run2["dataset"] = (dir / "missing.json").string();
    run2["partition"]["subsets"] = {subset};
    run2["seeds"] = {0};
    std::ofstream(dir / "bad_data2.json") << run2.dump();
    CHECK(run_cli("train --config " + (dir / "bad_data2.json").string() + " --out " +
                  (dir / "o2").string())
              .exit_code == 3);

    // Unknown ablation variant -> config error (2).
    CHECK(run_cli("synth --kind bogus --out " + (dir / "o3").string()).exit_code == 2);
}

TEST_CASE("cli synth feature_xor emits partitions for both modes") {
    const fs::path dir = work_dir() / "fx";
    fs::remove_all(dir);
    REQUIRE(run_cli("synth --kind feature_xor --n 2 --out " + dir.string()).exit_code == 0);
    const nlohmann::json meta = read_json(dir / "meta.json");
    CHECK(meta.contains("partition_grouped"));
    CHECK(meta.contains("partition_singleton"));
    const superman::Dataset ds =
        superman::load_dataset((dir / "dataset.json").string());
    CHECK(ds.samples.size() == 8);
}
