#pragma once

#include <map>
#include <string>
#include <vector>

#include "superman/signal_graph.hpp"

#include "nlohmann/json_fwd.hpp"

namespace superman {

// Declares what a measurement CSV is allowed to contain.
struct IngestSchema {
    std::vector<std::string> vocabulary;
    std::string timestamp_unit = "days";
    PathDirection direction = PathDirection::earlier_to_later;
    // Name of an inline label column; empty means labels come from a sidecar
    // file (entity_id,label).
    std::string label_column = "label";
};

IngestSchema schema_from_json(const nlohmann::json& j);
IngestSchema load_schema(const std::string& path);

// Reads rows of entity_id,signal_type,timestamp,value[,feature...][,label]
// and assembles one GraphSet per entity, ordered by entity_id. labels_csv is
// consulted when the label column is absent or not declared.
Dataset ingest_csv(const std::string& csv_path, const IngestSchema& schema,
                   const std::string& labels_csv = "");

nlohmann::json dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(const nlohmann::json& j);

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

// Flat measurement rows with a label column; the inverse of ingest_csv for
// path-shaped graphs.
std::string dataset_to_csv(const Dataset& dataset);
void save_dataset_csv(const Dataset& dataset, const std::string& path);

struct PartitionConfig {
    SubsetPartition partition;
    std::map<std::string, FeatureGrouping> feature_groups;
    DeltaPolicy delta_policy = DeltaPolicy::full;
    std::size_t window = 0;

    friend bool operator==(const PartitionConfig&, const PartitionConfig&) = default;
};

PartitionConfig partition_config_from_json(const nlohmann::json& j);
nlohmann::json partition_config_to_json(const PartitionConfig& config);
PartitionConfig load_partition_config(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace superman
