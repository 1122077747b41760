#include "superman/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "nlohmann/json.hpp"

namespace superman {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& what) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse " + what + " '" + s +
                         "'");
    }
    return v;
}

int parse_label(const std::string& s, std::size_t line_no) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ParseError("line " + std::to_string(line_no) + ": label must be 0 or 1, got '" + s +
                     "'");
}

} // namespace

IngestSchema schema_from_json(const nlohmann::json& j) {
    IngestSchema s;
    s.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    s.timestamp_unit = j.value("timestamp_unit", std::string("days"));
    s.direction = path_direction_from_string(j.value("direction", std::string("earlier_to_later")));
    s.label_column = j.value("label_column", std::string("label"));
    return s;
}

IngestSchema load_schema(const std::string& path) {
    return schema_from_json(nlohmann::json::parse(read_text_file(path)));
}

Dataset ingest_csv(const std::string& csv_path, const IngestSchema& schema,
                   const std::string& labels_csv) {
    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file " + csv_path);
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "entity_id" || header[1] != "signal_type" ||
        header[2] != "timestamp") {
        throw ParseError("header must start with entity_id,signal_type,timestamp,value");
    }
    int label_col = -1;
    std::size_t feature_end = header.size();
    if (!schema.label_column.empty()) {
        for (std::size_t i = 3; i < header.size(); ++i) {
            if (header[i] == schema.label_column) {
                label_col = static_cast<int>(i);
                feature_end = i;
            }
        }
    }
    const std::size_t n_features = feature_end - 3;
    if (n_features == 0) throw ParseError("no feature columns after timestamp");

    std::map<std::string, std::map<std::string, std::vector<MeasurementRecord>>> by_entity;
    std::map<std::string, int> labels;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
        }
        MeasurementRecord rec;
        rec.entity_id = f[0];
        rec.signal_type = f[1];
        if (std::find(schema.vocabulary.begin(), schema.vocabulary.end(), rec.signal_type) ==
            schema.vocabulary.end()) {
            throw SchemaError("line " + std::to_string(line_no) + ": signal type '" +
                              rec.signal_type + "' is not in the vocabulary");
        }
        rec.timestamp = parse_double(f[2], line_no, "timestamp");
        for (std::size_t i = 3; i < feature_end; ++i) {
            rec.features.push_back(parse_double(f[i], line_no, "feature " + header[i]));
        }
        if (label_col >= 0) {
            const int lab = parse_label(f[label_col], line_no);
            auto [it, inserted] = labels.emplace(rec.entity_id, lab);
            if (!inserted && it->second != lab) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": conflicting labels for entity " + rec.entity_id);
            }
        }
        by_entity[rec.entity_id][rec.signal_type].push_back(std::move(rec));
    }

    if (!labels_csv.empty()) {
        std::ifstream lin(labels_csv);
        if (!lin) throw DataError("cannot open " + labels_csv);
        std::string lline;
        std::size_t lno = 0;
        while (std::getline(lin, lline)) {
            ++lno;
            if (lline.empty()) continue;
            const std::vector<std::string> f = split_csv_line(lline);
            if (lno == 1 && f.size() >= 2 && f[0] == "entity_id") continue;
            if (f.size() != 2) {
                throw ParseError("labels line " + std::to_string(lno) + ": expected entity_id,label");
            }
            labels[f[0]] = parse_label(f[1], lno);
        }
    }

    Dataset ds;
    ds.vocabulary = schema.vocabulary;
    ds.timestamp_unit = schema.timestamp_unit;
    for (auto& [entity, signals] : by_entity) {
        GraphSet set;
        set.entity_id = entity;
        auto lit = labels.find(entity);
        if (lit == labels.end()) {
            throw SchemaError("no label for entity " + entity);
        }
        set.label = lit->second;
        for (auto& [type, records] : signals) {
            set.graphs.push_back(build_path_graph(records, schema.direction));
        }
        canonicalize(set);
        ds.samples.push_back(std::move(set));
    }
    return ds;
}

nlohmann::json dataset_to_json(const Dataset& dataset) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["timestamp_unit"] = dataset.timestamp_unit;
    j["vocabulary"] = dataset.vocabulary;
    j["samples"] = nlohmann::ordered_json::array();
    for (const GraphSet& s : dataset.samples) {
        nlohmann::ordered_json js;
        js["entity_id"] = s.entity_id;
        js["label"] = s.label;
        js["graphs"] = nlohmann::ordered_json::array();
        for (const SignalGraph& g : s.graphs) {
            nlohmann::ordered_json jg;
            jg["signal_type"] = g.signal_type;
            jg["timestamps"] = g.node_timestamps;
            jg["features"] = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < g.node_count(); ++i) {
                std::vector<double> row(g.feature_dim());
                for (std::size_t c = 0; c < row.size(); ++c) row[c] = g.node_features(i, c);
                jg["features"].push_back(row);
            }
            jg["edges"] = nlohmann::ordered_json::array();
            for (const auto& [u, v] : g.edges) jg["edges"].push_back({u, v});
            js["graphs"].push_back(std::move(jg));
        }
        j["samples"].push_back(std::move(js));
    }
    return j;
}

Dataset dataset_from_json(const nlohmann::json& j) {
    Dataset ds;
    ds.timestamp_unit = j.value("timestamp_unit", std::string("days"));
    ds.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& js : j.at("samples")) {
        GraphSet set;
        set.entity_id = js.at("entity_id").get<std::string>();
        set.label = js.at("label").get<int>();
        for (const auto& jg : js.at("graphs")) {
            auto timestamps = jg.at("timestamps").get<std::vector<double>>();
            const auto& rows = jg.at("features");
            if (rows.size() != timestamps.size()) {
                throw SchemaError("graph feature rows do not match timestamps for entity " +
                                  set.entity_id);
            }
            const std::size_t d = rows.empty() ? 1 : rows[0].size();
            Tensor features({timestamps.size(), d});
            for (std::size_t i = 0; i < rows.size(); ++i) {
                auto row = rows[i].get<std::vector<double>>();
                if (row.size() != d) throw SchemaError("ragged feature rows");
                for (std::size_t c = 0; c < d; ++c) features(i, c) = row[c];
            }
            std::vector<std::pair<std::size_t, std::size_t>> edges;
            for (const auto& je : jg.at("edges")) {
                edges.emplace_back(je[0].get<std::size_t>(), je[1].get<std::size_t>());
            }
            set.graphs.push_back(make_signal_graph(jg.at("signal_type").get<std::string>(),
                                                   std::move(timestamps), std::move(features),
                                                   std::move(edges)));
        }
        canonicalize(set);
        ds.samples.push_back(std::move(set));
    }
    return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    write_text_file(path, dataset_to_json(dataset).dump(2) + "\n");
}

Dataset load_dataset(const std::string& path) {
    try {
        return dataset_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::size_t width = 1;
    for (const GraphSet& s : dataset.samples) {
        for (const SignalGraph& g : s.graphs) width = std::max(width, g.feature_dim());
    }
    std::ostringstream out;
    out << "entity_id,signal_type,timestamp,value";
    for (std::size_t i = 1; i < width; ++i) out << ",f" << i;
    out << ",label\n";
    out.precision(17);
    for (const GraphSet& s : dataset.samples) {
        for (const SignalGraph& g : s.graphs) {
            for (std::size_t i = 0; i < g.node_count(); ++i) {
                out << s.entity_id << ',' << g.signal_type << ',' << g.node_timestamps[i];
                for (std::size_t c = 0; c < width; ++c) {
                    out << ',' << (c < g.feature_dim() ? g.node_features(i, c) : 0.0);
                }
                out << ',' << s.label << '\n';
            }
        }
    }
    return out.str();
}

void save_dataset_csv(const Dataset& dataset, const std::string& path) {
    write_text_file(path, dataset_to_csv(dataset));
}

PartitionConfig partition_config_from_json(const nlohmann::json& j) {
    PartitionConfig cfg;
    std::size_t index = 0;
    for (const auto& js : j.at("subsets")) {
        Subset s;
        if (js.is_array()) {
            s.signal_types = js.get<std::vector<std::string>>();
            s.name = "subset_" + std::to_string(index);
        } else {
            s.name = js.value("name", "subset_" + std::to_string(index));
            s.signal_types = js.value("signals", std::vector<std::string>{});
            s.collector = collector_from_string(js.value("collector", std::string("none")));
        }
        cfg.partition.subsets.push_back(std::move(s));
        ++index;
    }
    if (j.contains("feature_groups")) {
        for (const auto& [type, groups] : j.at("feature_groups").items()) {
            FeatureGrouping g;
            g.groups = groups.get<std::vector<std::vector<std::size_t>>>();
            g.validate();
            cfg.feature_groups[type] = std::move(g);
        }
    }
    cfg.delta_policy = delta_policy_from_string(j.value("delta_policy", std::string("full")));
    cfg.window = j.value("window", std::size_t{0});
    if (cfg.delta_policy == DeltaPolicy::window && cfg.window < 1) {
        throw InvalidConfig("window policy requires window >= 1");
    }
    return cfg;
}

nlohmann::json partition_config_to_json(const PartitionConfig& config) {
    nlohmann::ordered_json j;
    j["subsets"] = nlohmann::ordered_json::array();
    for (const Subset& s : config.partition.subsets) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["signals"] = s.signal_types;
        js["collector"] = to_string(s.collector);
        j["subsets"].push_back(std::move(js));
    }
    j["feature_groups"] = nlohmann::ordered_json::object();
    for (const auto& [type, g] : config.feature_groups) j["feature_groups"][type] = g.groups;
    j["delta_policy"] = to_string(config.delta_policy);
    j["window"] = config.window;
    return j;
}

PartitionConfig load_partition_config(const std::string& path) {
    try {
        return partition_config_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
}

} // namespace superman
