#include "dsokr/datasets.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dsokr/rng.hpp"

namespace dsokr {

void SyntheticSpec::validate() const {
    if (n_train < 1 || n_val < 0 || n_test < 0) throw std::invalid_argument("invalid split sizes");
    if (d_x < 1 || d_y < 1 || d < 1) throw std::invalid_argument("dimensions must be positive");
    if (d >= d_y) throw std::invalid_argument("latent dimension d must be smaller than d_y");
    if (noise_variance < 0.0) throw std::invalid_argument("noise variance must be non-negative");
}

namespace {

Eigen::MatrixXd random_gaussian(Rng& rng, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

// Orthonormal columns via Householder QR of an i.i.d. Gaussian matrix.
Eigen::MatrixXd random_orthonormal(Rng& rng, int rows, int cols) {
    const Eigen::MatrixXd g = random_gaussian(rng, rows, cols);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    return q;
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    SyntheticData data;
    data.basis_u = random_orthonormal(rng, spec.d_y, spec.d);
    data.mixing_h = random_gaussian(rng, spec.d, spec.d_x);
    const Eigen::MatrixXd cov_eigvecs = random_orthonormal(rng, spec.d_x, spec.d_x);
    Eigen::VectorXd cov_sqrt(spec.d_x);
    for (int j = 0; j < spec.d_x; ++j) cov_sqrt(j) = std::pow(static_cast<double>(j + 1), -0.25);

    const double noise_sd = std::sqrt(spec.noise_variance);
    auto make_split = [&](int n) {
        Split s;
        s.inputs = random_gaussian(rng, n, spec.d_x) * cov_sqrt.asDiagonal() * cov_eigvecs.transpose();
        s.outputs = s.inputs * data.mixing_h.transpose() * data.basis_u.transpose() +
                    noise_sd * random_gaussian(rng, n, spec.d_y);
        return s;
    };
    data.train = make_split(spec.n_train);
    data.val = make_split(spec.n_val);
    data.test = make_split(spec.n_test);
    return data;
}

std::vector<StructuredOutput> rows_as_outputs(const Eigen::MatrixXd& m) {
    std::vector<StructuredOutput> out;
    out.reserve(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(Eigen::VectorXd(m.row(i).transpose()));
    return out;
}

NgramFeatures ngram_featurize(const std::vector<std::string>& strings, int n,
                              const std::vector<std::string>* vocabulary) {
    if (n < 1) throw std::invalid_argument("ngram_featurize: n must be >= 1");
    NgramFeatures out;
    std::map<std::string, int> index;
    if (vocabulary) {
        out.vocabulary = *vocabulary;
        for (std::size_t i = 0; i < out.vocabulary.size(); ++i)
            index[out.vocabulary[i]] = static_cast<int>(i);
    } else {
        for (const auto& s : strings) {
            for (std::size_t i = 0; i + n <= s.size(); ++i) {
                const std::string g = s.substr(i, n);
                if (index.try_emplace(g, static_cast<int>(out.vocabulary.size())).second)
                    out.vocabulary.push_back(g);
            }
        }
        if (out.vocabulary.empty()) throw std::invalid_argument("ngram_featurize: empty vocabulary");
    }
    out.counts = Eigen::MatrixXd::Zero(strings.size(), out.vocabulary.size());
    for (std::size_t r = 0; r < strings.size(); ++r) {
        const std::string& s = strings[r];
        for (std::size_t i = 0; i + n <= s.size(); ++i) {
            auto it = index.find(s.substr(i, n));
            if (it != index.end()) out.counts(r, it->second) += 1.0;
        }
    }
    return out;
}

Eigen::MatrixXd load_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("file not found: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                if (pos != cell.size() && cell.find_first_not_of(" \t\r", pos) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": cannot parse field '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void save_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

std::vector<Fingerprint> load_fingerprints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("file not found: " + path);
    std::vector<Fingerprint> fps;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Fingerprint fp;
        for (char c : line) {
            if (c != '0' && c != '1')
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": fingerprint lines must contain only 0/1");
            fp.bits.push_back(c == '1' ? 1 : 0);
        }
        if (!fps.empty() && fp.bits.size() != fps.front().bits.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": fingerprint length differs from previous lines");
        fps.push_back(std::move(fp));
    }
    return fps;
}

void save_fingerprints(const std::string& path, const std::vector<Fingerprint>& fps) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& fp : fps) {
        for (auto b : fp.bits) out << (b ? '1' : '0');
        out << '\n';
    }
}

std::vector<LabeledGraph> load_graphs_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("file not found: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    std::vector<LabeledGraph> graphs;
    for (const auto& jg : doc.at("graphs")) {
        LabeledGraph g;
        g.node_labels = jg.at("nodes").get<std::vector<int>>();
        for (const auto& je : jg.value("edges", nlohmann::json::array())) {
            if (!je.is_array() || je.size() < 2 || je.size() > 3)
                throw std::runtime_error(path + ": edge entries must be [u, v] or [u, v, label]");
            LabeledGraph::Edge e;
            e.u = je[0].get<int>();
            e.v = je[1].get<int>();
            if (je.size() == 3) e.label = je[2].get<int>();
            g.edges.push_back(e);
        }
        try {
            g.validate();
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path + ": graph " + std::to_string(graphs.size()) + ": " + e.what());
        }
        graphs.push_back(std::move(g));
    }
    return graphs;
}

void save_graphs_json(const std::string& path, const std::vector<LabeledGraph>& graphs) {
    nlohmann::json doc;
    doc["graphs"] = nlohmann::json::array();
    for (const auto& g : graphs) {
        nlohmann::json jg;
        jg["nodes"] = g.node_labels;
        jg["edges"] = nlohmann::json::array();
        for (const auto& e : g.edges) {
            nlohmann::json je = {e.u, e.v};
            if (e.label) je.push_back(*e.label);
            jg["edges"].push_back(je);
        }
        doc["graphs"].push_back(std::move(jg));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace dsokr
