#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dsokr/structured_output.hpp"

namespace dsokr {

// Synthetic least-squares regression task: outputs live in a d-dimensional
// subspace of R^{d_y}, y = U H x + noise, with decaying input covariance
// spectrum j^{-1/2}.
struct SyntheticSpec {
    int n_train = 2000;
    int n_val = 400;
    int n_test = 400;
    int d_x = 100;
    int d_y = 50;
    int d = 10;  // latent subspace dimension, < d_y
    double noise_variance = 0.01;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Split {
    Eigen::MatrixXd inputs;   // rows = samples
    Eigen::MatrixXd outputs;
};

struct SyntheticData {
    Split train, val, test;
    Eigen::MatrixXd basis_u;   // d_y x d, orthonormal columns
    Eigen::MatrixXd mixing_h;  // d x d_x
};

SyntheticData gen_synthetic(const SyntheticSpec& spec);

std::vector<StructuredOutput> rows_as_outputs(const Eigen::MatrixXd& m);

// Character n-gram count features. The vocabulary is built from the given
// corpus in first-occurrence order when not supplied; unknown n-grams are
// dropped when it is.
struct NgramFeatures {
    Eigen::MatrixXd counts;  // |strings| x |vocabulary|
    std::vector<std::string> vocabulary;
};

NgramFeatures ngram_featurize(const std::vector<std::string>& strings, int n,
                              const std::vector<std::string>* vocabulary = nullptr);

// --- file formats ---
// Vectors: CSV rows ('.' decimal). Fingerprints: lines of 0/1 characters.
// Graphs: JSON {"graphs": [{"nodes": [labels], "edges": [[u, v, label?]]}]}.

Eigen::MatrixXd load_csv_matrix(const std::string& path);
void save_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

std::vector<Fingerprint> load_fingerprints(const std::string& path);
void save_fingerprints(const std::string& path, const std::vector<Fingerprint>& fps);

std::vector<LabeledGraph> load_graphs_json(const std::string& path);
void save_graphs_json(const std::string& path, const std::vector<LabeledGraph>& graphs);

}  // namespace dsokr
