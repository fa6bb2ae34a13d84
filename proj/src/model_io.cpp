#include "autotandem/model_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace autotandem {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const json& arr) {
    Vector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw std::runtime_error("model json: matrix size mismatch");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    return m;
}

json scaler_to_json(const ScalerParams& s) {
    return json{{"min", vector_to_json(s.col_min)}, {"max", vector_to_json(s.col_max)}};
}

ScalerParams scaler_from_json(const json& j) {
    return ScalerParams{vector_from_json(j.at("min")), vector_from_json(j.at("max"))};
}

json wrap_document(std::string kind, json body) {
    body["format"] = "autotandem-model";
    body["version"] = kModelFormatVersion;
    body["kind"] = std::move(kind);
    return body;
}

json load_document(const std::filesystem::path& path, const char* expected_kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path.string());
    json j = json::parse(in);
    if (j.value("format", "") != "autotandem-model")
        throw std::runtime_error(path.string() + ": not a model document");
    if (j.value("version", -1) != kModelFormatVersion)
        throw std::runtime_error(path.string() + ": unsupported model version");
    if (expected_kind && j.value("kind", "") != expected_kind)
        throw std::runtime_error(path.string() + ": expected kind '" +
                                 expected_kind + "', got '" +
                                 j.value("kind", "") + "'");
    return j;
}

void write_document(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

json mlp_to_json(const MlpModel& m) {
    json spec{{"input_dim", m.spec.input_dim},
              {"hidden", m.spec.hidden},
              {"output_dim", m.spec.output_dim},
              {"activation", "relu"},
              {"learning_rate", m.spec.learning_rate},
              {"epochs", m.spec.epochs},
              {"batch_size", m.spec.batch_size},
              {"val_fraction", m.spec.val_fraction},
              {"patience", m.spec.patience},
              {"l2", m.spec.l2}};
    json layers = json::array();
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        layers.push_back(json{{"rows", m.weights[l].rows()},
                              {"cols", m.weights[l].cols()},
                              {"weights", matrix_to_json(m.weights[l])["data"]},
                              {"bias", vector_to_json(m.biases[l])}});
    }
    return json{{"spec", std::move(spec)}, {"layers", std::move(layers)}};
}

MlpModel mlp_from_json(const json& j) {
    MlpModel m;
    const json& spec = j.at("spec");
    m.spec.input_dim = spec.at("input_dim").get<int>();
    m.spec.hidden = spec.at("hidden").get<std::vector<int>>();
    m.spec.output_dim = spec.at("output_dim").get<int>();
    if (spec.at("activation").get<std::string>() != "relu")
        throw std::runtime_error("model json: unknown activation");
    m.spec.learning_rate = spec.at("learning_rate").get<double>();
    m.spec.epochs = spec.at("epochs").get<int>();
    m.spec.batch_size = spec.at("batch_size").get<int>();
    m.spec.val_fraction = spec.at("val_fraction").get<double>();
    m.spec.patience = spec.at("patience").get<int>();
    m.spec.l2 = spec.at("l2").get<double>();
    m.spec.validate();
    for (const json& layer : j.at("layers")) {
        json mat{{"rows", layer.at("rows")},
                 {"cols", layer.at("cols")},
                 {"data", layer.at("weights")}};
        m.weights.push_back(matrix_from_json(mat));
        m.biases.push_back(vector_from_json(layer.at("bias")));
    }
    std::vector<int> dims{m.spec.input_dim};
    dims.insert(dims.end(), m.spec.hidden.begin(), m.spec.hidden.end());
    dims.push_back(m.spec.output_dim);
    if (m.layer_count() + 1 != dims.size())
        throw std::runtime_error("model json: layer count mismatch");
    for (std::size_t l = 0; l < m.layer_count(); ++l)
        if (m.weights[l].rows() != dims[l] || m.weights[l].cols() != dims[l + 1] ||
            m.biases[l].size() != dims[l + 1])
            throw std::runtime_error("model json: layer shape mismatch");
    return m;
}

json tandem_to_json(const TandemModel& t) {
    return wrap_document(
        "tandem", json{{"x_scaler", scaler_to_json(t.x_scaler)},
                       {"y_scaler", scaler_to_json(t.y_scaler)},
                       {"forward", mlp_to_json(t.forward_net)},
                       {"inverse", mlp_to_json(t.inverse_net)},
                       {"metadata", json{{"tandem_loss_space", t.tandem_loss_space}}}});
}

TandemModel tandem_from_json(const json& j) {
    TandemModel t;
    t.x_scaler = scaler_from_json(j.at("x_scaler"));
    t.y_scaler = scaler_from_json(j.at("y_scaler"));
    t.forward_net = mlp_from_json(j.at("forward"));
    t.inverse_net = mlp_from_json(j.at("inverse"));
    if (j.contains("metadata"))
        t.tandem_loss_space = j["metadata"].value("tandem_loss_space", "scaled");
    if (t.forward_net.spec.input_dim != t.inverse_net.spec.output_dim ||
        t.forward_net.spec.output_dim != t.inverse_net.spec.input_dim)
        throw std::runtime_error("model json: tandem nets do not chain");
    return t;
}

json uncertainty_to_json(const UncertaintyModel& m) {
    if (const auto* forest = std::get_if<ForestModel>(&m)) {
        json trees = json::array();
        for (const auto& t : forest->trees)
            trees.push_back(json{{"feature", t.feature},
                                 {"threshold", t.threshold},
                                 {"left", t.left},
                                 {"right", t.right},
                                 {"leaf", t.leaf},
                                 {"leaf_values", matrix_to_json(t.leaf_values)}});
        return wrap_document("forest", json{{"input_dim", forest->input_dim},
                                            {"output_dim", forest->output_dim},
                                            {"trees", std::move(trees)}});
    }
    const auto& ens = std::get<EnsembleModel>(m);
    json members = json::array();
    for (const auto& mem : ens.members)
        members.push_back(json{{"scaler", scaler_to_json(mem.input_scaler)},
                               {"net", mlp_to_json(mem.net)}});
    return wrap_document("deep_ensemble", json{{"members", std::move(members)}});
}

UncertaintyModel uncertainty_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "forest") {
        ForestModel forest;
        forest.input_dim = j.at("input_dim").get<int>();
        forest.output_dim = j.at("output_dim").get<int>();
        for (const json& tj : j.at("trees")) {
            RegressionTree t;
            t.feature = tj.at("feature").get<std::vector<int>>();
            t.threshold = tj.at("threshold").get<std::vector<double>>();
            t.left = tj.at("left").get<std::vector<int>>();
            t.right = tj.at("right").get<std::vector<int>>();
            t.leaf = tj.at("leaf").get<std::vector<int>>();
            t.leaf_values = matrix_from_json(tj.at("leaf_values"));
            forest.trees.push_back(std::move(t));
        }
        return forest;
    }
    if (kind == "deep_ensemble") {
        EnsembleModel ens;
        for (const json& mj : j.at("members"))
            ens.members.push_back(EnsembleMember{scaler_from_json(mj.at("scaler")),
                                                 mlp_from_json(mj.at("net"))});
        return ens;
    }
    throw std::runtime_error("model json: unknown kind '" + kind + "'");
}

void save_tandem(const TandemModel& t, const std::filesystem::path& path) {
    write_document(tandem_to_json(t), path);
}

TandemModel load_tandem(const std::filesystem::path& path) {
    return tandem_from_json(load_document(path, "tandem"));
}

void save_uncertainty(const UncertaintyModel& m, const std::filesystem::path& path) {
    write_document(uncertainty_to_json(m), path);
}

UncertaintyModel load_uncertainty(const std::filesystem::path& path) {
    return uncertainty_from_json(load_document(path, nullptr));
}

}  // namespace autotandem
