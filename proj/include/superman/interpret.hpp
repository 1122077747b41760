#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "superman/metrics.hpp"
#include "superman/model.hpp"
#include "superman/signal_graph.hpp"

namespace superman {

// Exact additive attribution for one prediction. Node-level values exist
// only for graphs in singleton subsets; mixed subsets report the subset
// total alone.
struct ContributionReport {
    std::string entity_id;
    double logit = 0.0;
    double output_bias = 0.0;
    double reconstruction_residual = 0.0;
    std::vector<double> subset_contributions; // one per partition subset

    struct GraphEntry {
        std::size_t subset_index = 0;
        std::size_t graph_index = 0; // index into sample.graphs
        std::string signal_type;
        bool node_attributable = false;
        double contribution = 0.0;              // singleton subsets only
        std::vector<double> node_contributions; // singleton subsets only
        std::vector<double> node_timestamps;
    };
    std::vector<GraphEntry> graphs;
};

double node_contribution(const SupermanModel& model, const GraphSet& sample,
                         std::size_t graph_index, std::size_t node);
double graph_contribution(const SupermanModel& model, const GraphSet& sample,
                          std::size_t graph_index);
double subset_contribution(const SupermanModel& model, const GraphSet& sample,
                           std::size_t subset_index);

ContributionReport contribution_report(const SupermanModel& model, const GraphSet& sample);

// entity, subset, graph, node_index, timestamp, contribution rows; mixed
// subsets emit one subset-level row with blank node fields.
std::string contributions_to_csv(const SupermanModel& model,
                                 const std::vector<ContributionReport>& reports);

struct PerturbationCurve {
    std::string target; // subset name
    std::vector<double> noise_levels;
    std::vector<double> outputs;     // mean model output per level
    std::vector<double> output_stds; // across samples
    std::vector<double> direction;   // first principal component
};

// Pools the node features of every graph bound to the subset across the
// dataset, takes the first principal component (sign fixed so the largest
// magnitude entry is positive), then shifts matching node features by
// level * pc1 and records the mean model output.
PerturbationCurve pca_perturbation_curve(const SupermanModel& model, const Dataset& dataset,
                                         std::size_t subset_index,
                                         const std::vector<double>& noise_levels);

std::string perturbation_to_csv(const PerturbationCurve& curve);

enum class NoiseKind { additive, multiplicative, temporal };

NoiseKind noise_kind_from_string(const std::string& s);
std::string to_string(NoiseKind k);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::additive;
    std::vector<double> sigmas;
    std::size_t n_seeds = 5;
};

struct RobustnessRow {
    double sigma = 0.0;
    double d_auroc_pct_mean = 0.0;
    double d_auroc_pct_std = 0.0;
    double d_auprc_pct_mean = 0.0;
    double d_auprc_pct_std = 0.0;
};

// Test-time noise injection: the model stays fixed, the evaluation copy of
// the data is perturbed per (seed, level, repeat, sample) stream, and each
// row reports the relative percentage change against the clean metrics.
// sigma == 0 rows are exactly zero.
std::vector<RobustnessRow> noise_robustness(const SupermanModel& model, const Dataset& dataset,
                                            const std::vector<std::size_t>& indices,
                                            const NoiseSpec& spec, std::uint64_t seed);

std::string robustness_to_csv(const std::vector<RobustnessRow>& rows);

std::string reliability_to_csv(const std::vector<ReliabilityBin>& bins);

// Perturbation primitives (exposed for tests).
GraphSet apply_value_noise(const GraphSet& sample, double sigma, bool multiplicative, Rng& rng);
GraphSet apply_temporal_noise(const GraphSet& sample, double sigma, Rng& rng);

// Leading eigenvector of a symmetric matrix by cyclic Jacobi sweeps.
std::vector<double> leading_eigenvector(const Tensor& symmetric);

} // namespace superman
