#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pcad/network.hpp"

namespace pcad {

// Versioned model container: network spec, parameters (f64, round-trip
// exact through JSON), label map, and training metadata.
struct ModelFile {
    Network network;
    std::vector<int> label_map;  // initial label -> final label
    int n0 = 0;
    double mean_period = 0.0;
    double validation_accuracy = 0.0;
    double train_accuracy = 0.0;
    uint64_t seed = 0;
    std::string preset;
};

nlohmann::json model_to_json(const ModelFile& model);
ModelFile model_from_json(const nlohmann::json& j);

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace pcad
