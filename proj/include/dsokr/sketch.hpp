#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <string>
#include <vector>

namespace dsokr {

enum class SketchKind { SubSample, Gaussian, PSparsified };

const char* sketch_kind_name(SketchKind kind);
SketchKind sketch_kind_from_name(const std::string& name);

// Random linear map R in R^{m x n}. Immutable after draw; a fixed
// (kind, n, m, seed, q) tuple always reproduces the same matrix.
class SketchMatrix {
public:
    // SubSample: m distinct rows of the identity (unscaled).
    // Gaussian: i.i.d. N(0, 1/m) entries.
    // PSparsified: entries 0 w.p. 1-q, else N(0, 1/(m q)); all-zero rows are
    // redrawn so every row has at least one nonzero.
    static SketchMatrix draw(SketchKind kind, int n, int m, std::uint64_t seed, double q = 0.1);

    SketchKind kind() const { return kind_; }
    int rows() const { return m_; }
    int cols() const { return n_; }
    std::uint64_t seed() const { return seed_; }
    double density() const { return q_; }
    const std::vector<int>& indices() const { return indices_; }  // SubSample only

    // R K R^T, symmetrized. SubSample takes the gather path (exact sub-Gram).
    Eigen::MatrixXd sketch_gram(const Eigen::MatrixXd& k) const;

    // R v
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

    // A R^T for row-major batches A in R^{q x n}
    Eigen::MatrixXd apply_right(const Eigen::MatrixXd& a) const;

    Eigen::MatrixXd dense() const;

    // Empty placeholder; only draw() produces a usable sketch.
    SketchMatrix() = default;

private:
    SketchKind kind_ = SketchKind::SubSample;
    int m_ = 0;
    int n_ = 0;
    std::uint64_t seed_ = 0;
    double q_ = 1.0;
    std::vector<int> indices_;                // SubSample
    Eigen::MatrixXd dense_;                   // Gaussian
    Eigen::SparseMatrix<double> sparse_;      // PSparsified
};

}  // namespace dsokr
