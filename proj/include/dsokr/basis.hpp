#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dsokr/kernels.hpp"
#include "dsokr/sketch.hpp"
#include "dsokr/structured_output.hpp"

namespace dsokr {

// Orthonormal basis of the sketched empirical covariance operator: the
// frozen decoder-side layer. omega holds D_p^{-1/2} V_p^T from the
// eigendecomposition of the sketched Gram matrix; the finite feature map is
// psi(y) = omega * R * k^y.
struct SketchedBasis {
    Eigen::MatrixXd omega;        // p x m
    Eigen::VectorXd eigenvalues;  // descending, length p
    SketchMatrix sketch;
    KernelSpec kernel;
    // Training outputs the feature map actually references: the m selected
    // outputs for SubSample sketches, all n otherwise.
    std::vector<StructuredOutput> ref_outputs;
    // Linear kernel on dense outputs only: R * Y (m x d_Y), which collapses
    // R k^y to a single matrix-vector product and carries the
    // reconstruction map.
    Eigen::MatrixXd sketched_outputs;
    bool has_linear_path = false;

    int rank() const { return static_cast<int>(omega.rows()); }
};

// Eigendecomposition of R K R^T with rank truncation at rank_tol * sigma_1.
// Eigenvector signs are fixed (largest-magnitude entry positive) so results
// are reproducible. Throws std::runtime_error when the sketched Gram is
// numerically zero.
SketchedBasis fit_basis(const KernelSpec& kernel, std::span<const StructuredOutput> ys,
                        const SketchMatrix& sketch, double rank_tol = 1e-10);

// Same, reusing a precomputed Gram matrix (sweeps fit many bases on one K).
SketchedBasis fit_basis_with_gram(const KernelSpec& kernel, std::span<const StructuredOutput> ys,
                                  const Eigen::MatrixXd& k, const SketchMatrix& sketch,
                                  double rank_tol = 1e-10);

// psi(y) = omega * R * (k(y, y_1), ..., k(y, y_n))^T, length p.
Eigen::VectorXd feature_map(const SketchedBasis& basis, const StructuredOutput& y);

// Row i = feature_map(ys[i]); batched through one cross-Gram computation.
Eigen::MatrixXd feature_matrix(const SketchedBasis& basis, std::span<const StructuredOutput> ys);

// Linear-kernel decoder for dense outputs: Y^T R^T omega^T z.
Eigen::VectorXd reconstruct_linear(const SketchedBasis& basis, const Eigen::VectorXd& z);

}  // namespace dsokr
