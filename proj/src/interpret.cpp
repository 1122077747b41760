#include "superman/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "superman/parallel.hpp"

namespace superman {

namespace {

struct BoundSample {
    std::vector<std::vector<std::size_t>> members;
};

std::size_t subset_of_graph(const SupermanModel& model, const GraphSet& sample,
                            std::size_t graph_index) {
    if (graph_index >= sample.graphs.size()) throw InvalidNode("graph index out of range");
    return bind_graphs(model.partition, sample)[graph_index];
}

} // namespace

double node_contribution(const SupermanModel& model, const GraphSet& sample,
                         std::size_t graph_index, std::size_t node) {
    const std::size_t si = subset_of_graph(model, sample, graph_index);
    const SubsetModule& module = model.subsets[si];
    if (module.mixer.has_value()) {
        throw NotNodeAttributable("graph belongs to a non-linearly mixed subset");
    }
    const SignalGraph g = normalized_graph(model, sample.graphs[graph_index]);
    if (node >= g.node_count()) throw InvalidNode("node index out of range");
    const Tensor terms = node_contribution_terms(module.encoder, g);
    double acc = 0.0;
    for (std::size_t w = 0; w < g.node_count(); ++w) acc += terms(w, node);
    return acc;
}

double graph_contribution(const SupermanModel& model, const GraphSet& sample,
                          std::size_t graph_index) {
    const std::size_t si = subset_of_graph(model, sample, graph_index);
    const SubsetModule& module = model.subsets[si];
    if (module.mixer.has_value()) {
        throw NotNodeAttributable("graph belongs to a non-linearly mixed subset");
    }
    const SignalGraph g = normalized_graph(model, sample.graphs[graph_index]);
    const Tensor terms = node_contribution_terms(module.encoder, g);
    // Sum node by node so the value is exactly the sum of node contributions.
    double acc = 0.0;
    for (std::size_t j = 0; j < g.node_count(); ++j) {
        for (std::size_t w = 0; w < g.node_count(); ++w) acc += terms(w, j);
    }
    return acc;
}

double subset_contribution(const SupermanModel& model, const GraphSet& sample,
                           std::size_t subset_index) {
    if (subset_index >= model.subsets.size()) throw InvalidConfig("subset index out of range");
    const auto members = subset_members(model, sample);
    std::vector<const SignalGraph*> graphs;
    for (std::size_t gi : members[subset_index]) graphs.push_back(&sample.graphs[gi]);
    const Tensor rep = subset_representation(model, subset_index, graphs);
    double acc = 0.0;
    for (double x : rep.values()) acc += x;
    return acc;
}

ContributionReport contribution_report(const SupermanModel& model, const GraphSet& sample) {
    ContributionReport report;
    report.entity_id = sample.entity_id;
    report.output_bias = model.bias();
    report.logit = forward(model, sample);

    const auto members = subset_members(model, sample);
    double total = 0.0;
    for (std::size_t si = 0; si < model.subsets.size(); ++si) {
        const double c = subset_contribution(model, sample, si);
        report.subset_contributions.push_back(c);
        total += c;
    }
    report.reconstruction_residual = std::fabs(report.logit - report.output_bias - total);

    for (std::size_t si = 0; si < model.subsets.size(); ++si) {
        const bool attributable = !model.subsets[si].mixer.has_value();
        for (std::size_t gi : members[si]) {
            ContributionReport::GraphEntry entry;
            entry.subset_index = si;
            entry.graph_index = gi;
            entry.signal_type = sample.graphs[gi].signal_type;
            entry.node_attributable = attributable;
            entry.node_timestamps = sample.graphs[gi].node_timestamps;
            if (attributable) {
                const SignalGraph g = normalized_graph(model, sample.graphs[gi]);
                const Tensor terms = node_contribution_terms(model.subsets[si].encoder, g);
                double graph_total = 0.0;
                for (std::size_t j = 0; j < g.node_count(); ++j) {
                    double col = 0.0;
                    for (std::size_t w = 0; w < g.node_count(); ++w) col += terms(w, j);
                    entry.node_contributions.push_back(col);
                    graph_total += col;
                }
                entry.contribution = graph_total;
            }
            report.graphs.push_back(std::move(entry));
        }
    }
    return report;
}

std::string contributions_to_csv(const SupermanModel& model,
                                 const std::vector<ContributionReport>& reports) {
    std::ostringstream out;
    out.precision(17);
    out << "entity_id,subset,signal_type,graph_index,node_index,timestamp,contribution\n";
    for (const ContributionReport& r : reports) {
        for (const auto& g : r.graphs) {
            const std::string& subset_name = model.partition.subsets[g.subset_index].name;
            if (g.node_attributable) {
                for (std::size_t j = 0; j < g.node_contributions.size(); ++j) {
                    out << r.entity_id << ',' << subset_name << ',' << g.signal_type << ','
                        << g.graph_index << ',' << j << ',' << g.node_timestamps[j] << ','
                        << g.node_contributions[j] << '\n';
                }
            }
        }
        for (std::size_t si = 0; si < r.subset_contributions.size(); ++si) {
            out << r.entity_id << ',' << model.partition.subsets[si].name << ",,,,,"
                << r.subset_contributions[si] << '\n';
        }
    }
    return out.str();
}

std::vector<double> leading_eigenvector(const Tensor& symmetric) {
    const std::size_t d = symmetric.rows();
    if (symmetric.cols() != d) throw InvalidShape("expected a square matrix");
    // Cyclic Jacobi on a working copy; V accumulates rotations.
    Tensor a = symmetric;
    Tensor v({d, d});
    for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < d; ++i) {
        if (a(i, i) > a(best, best)) best = i;
    }
    std::vector<double> pc(d);
    for (std::size_t i = 0; i < d; ++i) pc[i] = v(i, best);
    // Sign convention: largest-magnitude entry positive.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < d; ++i) {
        if (std::fabs(pc[i]) > std::fabs(pc[arg])) arg = i;
    }
    if (pc[arg] < 0.0) {
        for (double& x : pc) x = -x;
    }
    return pc;
}

PerturbationCurve pca_perturbation_curve(const SupermanModel& model, const Dataset& dataset,
                                         std::size_t subset_index,
                                         const std::vector<double>& noise_levels) {
    if (subset_index >= model.subsets.size()) throw InvalidConfig("subset index out of range");
    PerturbationCurve curve;
    curve.target = model.partition.subsets[subset_index].name;
    curve.noise_levels = noise_levels;

    // Pool raw node features of every graph bound to this subset.
    std::vector<std::vector<std::size_t>> bindings;
    bindings.reserve(dataset.samples.size());
    std::size_t rows = 0;
    const std::size_t d = model.subsets[subset_index].rep_dim;
    for (const GraphSet& s : dataset.samples) {
        bindings.push_back(bind_graphs(model.partition, s));
        for (std::size_t gi = 0; gi < s.graphs.size(); ++gi) {
            if (bindings.back()[gi] == subset_index) rows += s.graphs[gi].node_count();
        }
    }
    if (rows < 2) throw DataError("subset has fewer than 2 nodes across the dataset");

    std::vector<double> mean(d, 0.0);
    Tensor pooled({rows, d});
    std::size_t r = 0;
    for (std::size_t si = 0; si < dataset.samples.size(); ++si) {
        const GraphSet& s = dataset.samples[si];
        for (std::size_t gi = 0; gi < s.graphs.size(); ++gi) {
            if (bindings[si][gi] != subset_index) continue;
            const SignalGraph& g = s.graphs[gi];
            if (g.feature_dim() != d) throw InvalidShape("feature width mismatch in subset");
            for (std::size_t i = 0; i < g.node_count(); ++i, ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    pooled(r, c) = g.node_features(i, c);
                    mean[c] += g.node_features(i, c);
                }
            }
        }
    }
    for (double& m : mean) m /= static_cast<double>(rows);
    Tensor cov({d, d});
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t p = 0; p < d; ++p) {
            const double xp = pooled(i, p) - mean[p];
            for (std::size_t q = 0; q < d; ++q) {
                cov(p, q) += xp * (pooled(i, q) - mean[q]);
            }
        }
    }
    double trace = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = 0; q < d; ++q) cov(p, q) /= static_cast<double>(rows - 1);
        trace += cov(p, p);
    }
    if (trace < 1e-24) throw DegenerateDirection("subset features have no variance");
    curve.direction = leading_eigenvector(cov);

    for (double level : noise_levels) {
        std::vector<double> outputs(dataset.samples.size());
        parallel_for(dataset.samples.size(), [&](std::size_t si) {
            if (level == 0.0) {
                outputs[si] = model_output(model, dataset.samples[si]);
                return;
            }
            GraphSet shifted = dataset.samples[si];
            for (std::size_t gi = 0; gi < shifted.graphs.size(); ++gi) {
                if (bindings[si][gi] != subset_index) continue;
                SignalGraph& g = shifted.graphs[gi];
                for (std::size_t i = 0; i < g.node_count(); ++i) {
                    for (std::size_t c = 0; c < d; ++c) {
                        g.node_features(i, c) += level * curve.direction[c];
                    }
                }
            }
            outputs[si] = model_output(model, shifted);
        });
        double m = 0.0;
        for (double o : outputs) m += o;
        m /= static_cast<double>(outputs.size());
        double var = 0.0;
        for (double o : outputs) var += (o - m) * (o - m);
        curve.outputs.push_back(m);
        curve.output_stds.push_back(outputs.size() > 1
                                        ? std::sqrt(var / static_cast<double>(outputs.size() - 1))
                                        : 0.0);
    }
    return curve;
}

std::string perturbation_to_csv(const PerturbationCurve& curve) {
    std::ostringstream out;
    out.precision(17);
    out << "level,mean_output,std\n";
    for (std::size_t i = 0; i < curve.noise_levels.size(); ++i) {
        out << curve.noise_levels[i] << ',' << curve.outputs[i] << ',' << curve.output_stds[i]
            << '\n';
    }
    return out.str();
}

NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "additive") return NoiseKind::additive;
    if (s == "multiplicative") return NoiseKind::multiplicative;
    if (s == "temporal") return NoiseKind::temporal;
    throw InvalidConfig("unknown noise kind: " + s);
}

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::additive: return "additive";
        case NoiseKind::multiplicative: return "multiplicative";
        case NoiseKind::temporal: return "temporal";
    }
    return "additive";
}

GraphSet apply_value_noise(const GraphSet& sample, double sigma, bool multiplicative, Rng& rng) {
    GraphSet out = sample;
    for (SignalGraph& g : out.graphs) {
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            const double eps = rng.normal();
            double& v = g.node_features(i, 0);
            v += multiplicative ? eps * std::fabs(v) * sigma : eps * sigma;
        }
    }
    return out;
}

GraphSet apply_temporal_noise(const GraphSet& sample, double sigma, Rng& rng) {
    GraphSet out = sample;
    for (SignalGraph& g : out.graphs) {
        const std::size_t n = g.node_count();
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                const double eps = rng.normal(0.0, sigma);
                g.delta(u, v) += eps;
                g.delta(v, u) -= eps;
            }
        }
    }
    return out;
}

std::vector<RobustnessRow> noise_robustness(const SupermanModel& model, const Dataset& dataset,
                                            const std::vector<std::size_t>& indices,
                                            const NoiseSpec& spec, std::uint64_t seed) {
    if (spec.n_seeds < 1) throw InvalidConfig("n_seeds must be at least 1");
    std::vector<const GraphSet*> clean;
    std::vector<int> labels;
    for (std::size_t i : indices) {
        clean.push_back(&dataset.samples[i]);
        labels.push_back(dataset.samples[i].label);
    }
    const std::vector<double> clean_probs = predict_probs(model, clean);
    const double auroc0 = auroc(clean_probs, labels);
    const double auprc0 = auprc(clean_probs, labels);

    std::vector<RobustnessRow> rows;
    for (std::size_t li = 0; li < spec.sigmas.size(); ++li) {
        const double sigma = spec.sigmas[li];
        RobustnessRow row;
        row.sigma = sigma;
        if (sigma == 0.0) {
            rows.push_back(row);
            continue;
        }
        std::vector<double> d_auroc, d_auprc;
        for (std::size_t rep = 0; rep < spec.n_seeds; ++rep) {
            std::vector<double> probs(clean.size());
            parallel_for(clean.size(), [&](std::size_t k) {
                Rng rng(mix_seed(seed, li, rep, k));
                GraphSet noisy;
                switch (spec.kind) {
                    case NoiseKind::additive:
                        noisy = apply_value_noise(*clean[k], sigma, false, rng);
                        break;
                    case NoiseKind::multiplicative:
                        noisy = apply_value_noise(*clean[k], sigma, true, rng);
                        break;
                    case NoiseKind::temporal:
                        noisy = apply_temporal_noise(*clean[k], sigma, rng);
                        break;
                }
                probs[k] = predict_proba(model, noisy);
            });
            d_auroc.push_back(100.0 * (auroc(probs, labels) - auroc0) / auroc0);
            d_auprc.push_back(100.0 * (auprc(probs, labels) - auprc0) / auprc0);
        }
        auto mean_std = [](const std::vector<double>& xs) {
            double m = 0.0;
            for (double x : xs) m += x;
            m /= static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - m) * (x - m);
            const double sd =
                xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
            return std::pair<double, double>{m, sd};
        };
        std::tie(row.d_auroc_pct_mean, row.d_auroc_pct_std) = mean_std(d_auroc);
        std::tie(row.d_auprc_pct_mean, row.d_auprc_pct_std) = mean_std(d_auprc);
        rows.push_back(row);
    }
    return rows;
}

std::string robustness_to_csv(const std::vector<RobustnessRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "sigma,d_auroc_pct_mean,d_auroc_pct_std,d_auprc_pct_mean,d_auprc_pct_std\n";
    for (const RobustnessRow& r : rows) {
        out << r.sigma << ',' << r.d_auroc_pct_mean << ',' << r.d_auroc_pct_std << ','
            << r.d_auprc_pct_mean << ',' << r.d_auprc_pct_std << '\n';
    }
    return out.str();
}

std::string reliability_to_csv(const std::vector<ReliabilityBin>& bins) {
    std::ostringstream out;
    out.precision(17);
    out << "bin_center,confidence,accuracy,count\n";
    for (const ReliabilityBin& b : bins) {
        out << b.bin_center << ',' << b.confidence << ',' << b.accuracy << ',' << b.count << '\n';
    }
    return out.str();
}

} // namespace superman
