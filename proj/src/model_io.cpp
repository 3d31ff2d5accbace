#include "pcad/model_io.hpp"

#include <fstream>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

const char* kSchema = "pcad.model.v1";

nlohmann::json tensor_to_json(const Tensor& t) {
    return {{"shape", t.shape}, {"data", t.data}};
}

Tensor tensor_from_json(const nlohmann::json& j) {
    Tensor t;
    j.at("shape").get_to(t.shape);
    j.at("data").get_to(t.data);
    size_t expected = 1;
    for (size_t s : t.shape) expected *= s;
    if (t.data.size() != expected) throw DataError("model tensor shape/data mismatch");
    return t;
}

}  // namespace

nlohmann::json model_to_json(const ModelFile& model) {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["d"] = model.network.spec.d;
    j["T"] = model.network.spec.T;
    j["n"] = model.network.spec.n;
    j["n0"] = model.n0;
    j["label_map"] = model.label_map;
    j["mean_period"] = model.mean_period;
    j["validation_accuracy"] = model.validation_accuracy;
    j["train_accuracy"] = model.train_accuracy;
    j["seed"] = model.seed;
    j["preset"] = model.preset;
    j["params"] = nlohmann::json::array();
    for (const auto& layer : model.network.params.layers) {
        nlohmann::json jl;
        jl["weights"] = tensor_to_json(layer.weights);
        jl["bias"] = tensor_to_json(layer.bias);
        j["params"].push_back(jl);
    }
    return j;
}

ModelFile model_from_json(const nlohmann::json& j) {
    if (j.value("schema", "") != kSchema)
        throw DataError("unsupported model schema: " + j.value("schema", "<missing>"));
    ModelFile model;
    model.network.spec = layout(j.at("d").get<int>(), j.at("T").get<int>(), j.at("n").get<int>());
    model.n0 = j.at("n0").get<int>();
    j.at("label_map").get_to(model.label_map);
    model.mean_period = j.at("mean_period").get<double>();
    model.validation_accuracy = j.at("validation_accuracy").get<double>();
    model.train_accuracy = j.at("train_accuracy").get<double>();
    model.seed = j.at("seed").get<uint64_t>();
    model.preset = j.value("preset", "");

    const auto& params = j.at("params");
    Parameters expected = zero_parameters(model.network.spec);
    if (params.size() != expected.layers.size())
        throw DataError("model parameter layer count mismatch");
    model.network.params.layers.resize(params.size());
    for (size_t l = 0; l < params.size(); ++l) {
        model.network.params.layers[l].weights = tensor_from_json(params[l].at("weights"));
        model.network.params.layers[l].bias = tensor_from_json(params[l].at("bias"));
        if (model.network.params.layers[l].weights.shape != expected.layers[l].weights.shape ||
            model.network.params.layers[l].bias.shape != expected.layers[l].bias.shape)
            throw DataError("model parameter shape mismatch at layer " + std::to_string(l));
    }
    return model;
}

void save_model(const ModelFile& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << model_to_json(model).dump(2) << '\n';
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace pcad
