#include "dsokr/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsokr {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
    j["data"] = std::move(data);
    return j;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw std::runtime_error("matrix data length does not match rows*cols");
    Eigen::MatrixXd m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[idx++];
    return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    const auto data = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(data.data(), data.size());
}

}  // namespace

nlohmann::json to_json(const KernelSpec& spec) {
    nlohmann::json j;
    j["kind"] = kernel_kind_name(spec.kind);
    j["gamma"] = spec.gamma;
    j["wl_iterations"] = spec.wl_iterations;
    j["normalize"] = spec.normalize;
    return j;
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j) {
    KernelSpec spec;
    spec.kind = kernel_kind_from_name(j.at("kind").get<std::string>());
    spec.gamma = j.value("gamma", 1.0);
    spec.wl_iterations = j.value("wl_iterations", 3);
    spec.normalize = j.value("normalize", false);
    return spec;
}

nlohmann::json to_json(const SketchMatrix& sketch) {
    nlohmann::json j;
    j["kind"] = sketch_kind_name(sketch.kind());
    j["n"] = sketch.cols();
    j["m"] = sketch.rows();
    j["seed"] = sketch.seed();
    j["density"] = sketch.density();
    if (sketch.kind() == SketchKind::SubSample) j["indices"] = sketch.indices();
    return j;
}

SketchMatrix sketch_from_json(const nlohmann::json& j) {
    const SketchKind kind = sketch_kind_from_name(j.at("kind").get<std::string>());
    SketchMatrix sketch =
        SketchMatrix::draw(kind, j.at("n").get<int>(), j.at("m").get<int>(),
                           j.at("seed").get<std::uint64_t>(), j.value("density", 0.1));
    if (kind == SketchKind::SubSample && j.contains("indices") &&
        j["indices"].get<std::vector<int>>() != sketch.indices())
        throw std::runtime_error("sketch file indices do not match the (n, m, seed) redraw");
    return sketch;
}

nlohmann::json to_json(const StructuredOutput& y) {
    nlohmann::json j;
    if (is_vector(y)) {
        j["type"] = "vector";
        j["values"] = vector_to_json(std::get<Eigen::VectorXd>(y));
    } else if (is_fingerprint(y)) {
        const auto& fp = std::get<Fingerprint>(y);
        std::string bits;
        bits.reserve(fp.bits.size());
        for (auto b : fp.bits) bits.push_back(b ? '1' : '0');
        j["type"] = "fingerprint";
        j["bits"] = std::move(bits);
    } else {
        const auto& g = std::get<LabeledGraph>(y);
        j["type"] = "graph";
        j["nodes"] = g.node_labels;
        j["edges"] = nlohmann::json::array();
        for (const auto& e : g.edges) {
            nlohmann::json je = {e.u, e.v};
            if (e.label) je.push_back(*e.label);
            j["edges"].push_back(je);
        }
    }
    return j;
}

StructuredOutput structured_output_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "vector") return vector_from_json(j.at("values"));
    if (type == "fingerprint") {
        Fingerprint fp;
        for (char c : j.at("bits").get<std::string>()) {
            if (c != '0' && c != '1')
                throw std::runtime_error("fingerprint bits must contain only 0/1");
            fp.bits.push_back(c == '1' ? 1 : 0);
        }
        return fp;
    }
    if (type == "graph") {
        LabeledGraph g;
        g.node_labels = j.at("nodes").get<std::vector<int>>();
        for (const auto& je : j.at("edges")) {
            LabeledGraph::Edge e;
            e.u = je.at(0).get<int>();
            e.v = je.at(1).get<int>();
            if (je.size() > 2) e.label = je.at(2).get<int>();
            g.edges.push_back(e);
        }
        g.validate();
        return g;
    }
    throw std::runtime_error("unknown structured output type: " + type);
}

nlohmann::json to_json(const SketchedBasis& basis) {
    nlohmann::json j;
    j["kernel"] = to_json(basis.kernel);
    j["sketch"] = to_json(basis.sketch);
    j["omega"] = matrix_to_json(basis.omega);
    j["eigenvalues"] = vector_to_json(basis.eigenvalues);
    j["ref_outputs"] = nlohmann::json::array();
    for (const auto& y : basis.ref_outputs) j["ref_outputs"].push_back(to_json(y));
    j["has_linear_path"] = basis.has_linear_path;
    if (basis.has_linear_path) j["sketched_outputs"] = matrix_to_json(basis.sketched_outputs);
    return j;
}

SketchedBasis basis_from_json(const nlohmann::json& j) {
    SketchedBasis basis{.omega = matrix_from_json(j.at("omega")),
                        .eigenvalues = {},
                        .sketch = sketch_from_json(j.at("sketch")),
                        .kernel = kernel_spec_from_json(j.at("kernel"))};
    basis.eigenvalues = vector_from_json(j.at("eigenvalues"));
    for (const auto& jy : j.at("ref_outputs"))
        basis.ref_outputs.push_back(structured_output_from_json(jy));
    basis.has_linear_path = j.value("has_linear_path", false);
    if (basis.has_linear_path) basis.sketched_outputs = matrix_from_json(j.at("sketched_outputs"));
    return basis;
}

nlohmann::json to_json(const MLPRegressor& model) {
    nlohmann::json j;
    j["layer_dims"] = model.layer_dims();
    j["activation"] = activation_name(model.activation);
    j["seed"] = model.seed;
    j["weights"] = nlohmann::json::array();
    j["biases"] = nlohmann::json::array();
    for (const auto& w : model.weights) j["weights"].push_back(matrix_to_json(w));
    for (const auto& b : model.biases) j["biases"].push_back(vector_to_json(b));
    return j;
}

MLPRegressor mlp_from_json(const nlohmann::json& j) {
    const auto dims = j.at("layer_dims").get<std::vector<int>>();
    MLPRegressor model = MLPRegressor::init(
        dims, activation_from_name(j.at("activation").get<std::string>()),
        j.value("seed", std::uint64_t{0}));
    if (j.at("weights").size() != model.weights.size() ||
        j.at("biases").size() != model.biases.size())
        throw std::runtime_error("model file layer count does not match layer_dims");
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Eigen::MatrixXd w = matrix_from_json(j["weights"][l]);
        Eigen::VectorXd b = vector_from_json(j["biases"][l]);
        if (w.rows() != model.weights[l].rows() || w.cols() != model.weights[l].cols() ||
            b.size() != model.biases[l].size())
            throw std::runtime_error("model file layer " + std::to_string(l) +
                                     " shape does not match layer_dims");
        model.weights[l] = std::move(w);
        model.biases[l] = std::move(b);
    }
    return model;
}

void save_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    out << "epoch,train_mse,val_mse\n";
    for (const auto& row : history)
        out << row.epoch << ',' << row.train_mse << ',' << row.val_mse << '\n';
}

std::vector<EpochStats> load_history_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("file not found: " + path);
    std::vector<EpochStats> history;
    std::string line;
    if (!std::getline(in, line) || line.rfind("epoch,", 0) != 0)
        throw std::runtime_error(path + ": missing history header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        EpochStats row{};
        char c1 = 0, c2 = 0;
        std::stringstream ss(line);
        if (!(ss >> row.epoch >> c1 >> row.train_mse >> c2 >> row.val_mse) || c1 != ',' || c2 != ',')
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed history row");
        history.push_back(row);
    }
    return history;
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("file not found: " + path);
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
}

}  // namespace dsokr
