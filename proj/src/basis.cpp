#include "dsokr/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace dsokr {

namespace {

bool linear_path_applies(const KernelSpec& kernel, std::span<const StructuredOutput> ys) {
    if (kernel.kind != KernelKind::Linear || kernel.normalize) return false;
    for (const auto& y : ys)
        if (!is_vector(y)) return false;
    return !ys.empty();
}

Eigen::MatrixXd stack_outputs(std::span<const StructuredOutput> ys) {
    const auto d = std::get<Eigen::VectorXd>(ys[0]).size();
    Eigen::MatrixXd m(ys.size(), d);
    for (std::size_t i = 0; i < ys.size(); ++i) m.row(i) = std::get<Eigen::VectorXd>(ys[i]).transpose();
    return m;
}

void decompose(SketchedBasis& basis, const Eigen::MatrixXd& sketched_gram, double rank_tol) {
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) throw std::invalid_argument("rank_tol must be in (0, 1)");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sketched_gram);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    const int m = static_cast<int>(ev.size());
    const double sigma1 = ev(m - 1);
    if (!(sigma1 > 0.0))
        throw std::runtime_error("empty basis: sketched Gram matrix is numerically zero");
    int p = 0;
    while (p < m && ev(m - 1 - p) > rank_tol * sigma1) ++p;
    basis.omega.resize(p, m);
    basis.eigenvalues.resize(p);
    for (int j = 0; j < p; ++j) {
        const double sigma = ev(m - 1 - j);
        Eigen::VectorXd v = solver.eigenvectors().col(m - 1 - j);
        int arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        basis.eigenvalues(j) = sigma;
        basis.omega.row(j) = v.transpose() / std::sqrt(sigma);
    }
}

void attach_outputs(SketchedBasis& basis, std::span<const StructuredOutput> ys) {
    if (basis.sketch.kind() == SketchKind::SubSample) {
        for (int idx : basis.sketch.indices()) basis.ref_outputs.push_back(ys[idx]);
    } else {
        basis.ref_outputs.assign(ys.begin(), ys.end());
    }
}

}  // namespace

SketchedBasis fit_basis(const KernelSpec& kernel, std::span<const StructuredOutput> ys,
                        const SketchMatrix& sketch, double rank_tol) {
    if (sketch.cols() != static_cast<int>(ys.size()))
        throw std::invalid_argument("fit_basis: sketch width does not match training set size");
    SketchedBasis basis;
    basis.kernel = kernel;
    basis.sketch = sketch;
    attach_outputs(basis, ys);
    if (linear_path_applies(kernel, ys)) {
        basis.has_linear_path = true;
        const Eigen::MatrixXd y = stack_outputs(ys);
        basis.sketched_outputs = sketch.apply_right(y.transpose()).transpose();  // m x d_Y
        decompose(basis, (basis.sketched_outputs * basis.sketched_outputs.transpose()).eval(), rank_tol);
        return basis;
    }
    if (sketch.kind() == SketchKind::SubSample) {
        // sub-Gram only: K_tilde = K[indices][indices]
        const Eigen::MatrixXd kt = gram(kernel, basis.ref_outputs);
        decompose(basis, kt, rank_tol);
        return basis;
    }
    const Eigen::MatrixXd k = gram(kernel, ys);
    decompose(basis, sketch.sketch_gram(k), rank_tol);
    return basis;
}

SketchedBasis fit_basis_with_gram(const KernelSpec& kernel, std::span<const StructuredOutput> ys,
                                  const Eigen::MatrixXd& k, const SketchMatrix& sketch,
                                  double rank_tol) {
    if (sketch.cols() != static_cast<int>(ys.size()) || k.rows() != sketch.cols())
        throw std::invalid_argument("fit_basis_with_gram: dimension mismatch");
    SketchedBasis basis;
    basis.kernel = kernel;
    basis.sketch = sketch;
    attach_outputs(basis, ys);
    if (linear_path_applies(kernel, ys)) {
        basis.has_linear_path = true;
        const Eigen::MatrixXd y = stack_outputs(ys);
        basis.sketched_outputs = sketch.apply_right(y.transpose()).transpose();
    }
    decompose(basis, sketch.sketch_gram(k), rank_tol);
    return basis;
}

Eigen::MatrixXd feature_matrix(const SketchedBasis& basis, std::span<const StructuredOutput> ys) {
    if (ys.empty()) return Eigen::MatrixXd(0, basis.rank());
    if (basis.has_linear_path) {
        bool all_dense = true;
        for (const auto& y : ys)
            if (!is_vector(y)) all_dense = false;
        if (all_dense) {
            const Eigen::MatrixXd x = stack_outputs(ys);
            return x * basis.sketched_outputs.transpose() * basis.omega.transpose();
        }
    }
    const Eigen::MatrixXd c = cross_gram(basis.kernel, ys, basis.ref_outputs);
    if (basis.sketch.kind() == SketchKind::SubSample) return c * basis.omega.transpose();
    return basis.sketch.apply_right(c) * basis.omega.transpose();
}

Eigen::VectorXd feature_map(const SketchedBasis& basis, const StructuredOutput& y) {
    const StructuredOutput arr[1] = {y};
    return feature_matrix(basis, {arr, 1}).row(0).transpose();
}

Eigen::VectorXd reconstruct_linear(const SketchedBasis& basis, const Eigen::VectorXd& z) {
    if (!basis.has_linear_path)
        throw std::invalid_argument(
            "reconstruct_linear requires an unnormalized linear kernel on dense outputs");
    if (z.size() != basis.rank()) throw std::invalid_argument("reconstruct_linear: coefficient length mismatch");
    return basis.sketched_outputs.transpose() * (basis.omega.transpose() * z);
}

}  // namespace dsokr
