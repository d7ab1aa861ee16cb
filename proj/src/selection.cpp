#include "dsokr/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsokr/decode.hpp"
#include "dsokr/metrics.hpp"
#include "dsokr/rng.hpp"

namespace dsokr {

Eigen::VectorXd approximate_leverage_scores(const Eigen::MatrixXd& k, double lambda, int n_s,
                                            std::uint64_t seed) {
    const int n = static_cast<int>(k.rows());
    if (k.cols() != n) throw std::invalid_argument("leverage scores: K must be square");
    if (lambda <= 0.0) throw std::invalid_argument("leverage scores: lambda must be positive");
    if (n_s < 1 || n_s > n) throw std::invalid_argument("leverage scores: need 1 <= n_s <= n");

    Rng rng(seed);
    const std::vector<int> sample = rng.sample_without_replacement(n, n_s);

    Eigen::MatrixXd c(n, n_s), w(n_s, n_s);
    for (int j = 0; j < n_s; ++j) c.col(j) = k.col(sample[j]);
    for (int i = 0; i < n_s; ++i)
        for (int j = 0; j < n_s; ++j) w(i, j) = k(sample[i], sample[j]);
    w = ((w + w.transpose()) / 2.0).eval();

    // Nystrom factor B = K_{:,S} W^{+1/2}, so that B B^T is the Nystrom
    // approximation of K and diag(B (B^T B + n lambda I)^{-1} B^T) equals
    // diag(K_hat (K_hat + n lambda I)^{-1}) by the push-through identity.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
    const Eigen::VectorXd& ew = es.eigenvalues();
    const double cutoff = std::max(ew.maxCoeff(), 0.0) * 1e-12;
    int kept = 0;
    for (int i = 0; i < n_s; ++i)
        if (ew(i) > cutoff) ++kept;
    if (kept == 0) return Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd half_inv(n_s, kept);
    int col = 0;
    for (int i = 0; i < n_s; ++i)
        if (ew(i) > cutoff) half_inv.col(col++) = es.eigenvectors().col(i) / std::sqrt(ew(i));

    const Eigen::MatrixXd b = c * half_inv;  // n x kept
    Eigen::MatrixXd inner = b.transpose() * b;
    inner.diagonal().array() += static_cast<double>(n) * lambda;
    const Eigen::MatrixXd solved = inner.ldlt().solve(b.transpose());  // kept x n
    Eigen::VectorXd scores(n);
    for (int i = 0; i < n; ++i) scores(i) = b.row(i).dot(solved.col(i));
    std::sort(scores.data(), scores.data() + n, std::greater<double>());
    return scores;
}

Eigen::VectorXd approximate_leverage_scores(const KernelSpec& kernel,
                                            std::span<const StructuredOutput> ys, double lambda,
                                            int n_s, std::uint64_t seed) {
    return approximate_leverage_scores(gram(kernel, ys), lambda, n_s, seed);
}

namespace {

Eigen::MatrixXd stack_dense(std::span<const StructuredOutput> ys) {
    if (ys.empty()) return {};
    Eigen::MatrixXd m(ys.size(), std::get<Eigen::VectorXd>(ys[0]).size());
    for (std::size_t i = 0; i < ys.size(); ++i) m.row(i) = std::get<Eigen::VectorXd>(ys[i]).transpose();
    return m;
}

}  // namespace

std::vector<SweepRow> perfect_h_sweep(const KernelSpec& kernel,
                                      std::span<const StructuredOutput> ys_train,
                                      std::span<const StructuredOutput> ys_val,
                                      const std::vector<int>& val_candidate_indices,
                                      std::span<const StructuredOutput> candidates,
                                      const std::vector<int>& ms, SweepTask task,
                                      const SweepConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("perfect_h_sweep: replicates must be >= 1");
    if (!std::is_sorted(ms.begin(), ms.end()))
        throw std::invalid_argument("perfect_h_sweep: ms must be sorted ascending");
    if (task == SweepTask::CandidateRanking) {
        if (candidates.empty()) throw std::invalid_argument("CandidateRanking task needs candidates");
        if (val_candidate_indices.size() != ys_val.size())
            throw std::invalid_argument("CandidateRanking task needs one truth index per validation pair");
    }
    const int n = static_cast<int>(ys_train.size());

    const bool linear_path = kernel.kind == KernelKind::Linear && !kernel.normalize &&
                             !ys_train.empty() && is_vector(ys_train[0]);
    if (task == SweepTask::LinearMSE && !linear_path)
        throw std::invalid_argument(
            "LinearMSE task requires an unnormalized linear kernel on dense outputs");
    Eigen::MatrixXd k_train;
    if (!linear_path) k_train = gram(kernel, ys_train);
    Eigen::MatrixXd val_dense;
    if (task == SweepTask::LinearMSE) val_dense = stack_dense(ys_val);

    std::vector<SweepRow> table;
    for (int m : ms) {
        SweepRow row;
        row.m = m;
        for (int rep = 0; rep < cfg.replicates; ++rep) {
            const SketchMatrix sketch =
                SketchMatrix::draw(cfg.sketch_kind, n, m, cfg.seed + static_cast<std::uint64_t>(rep),
                                   cfg.sparsity);
            const SketchedBasis basis =
                linear_path ? fit_basis(kernel, ys_train, sketch, cfg.rank_tol)
                            : fit_basis_with_gram(kernel, ys_train, k_train, sketch, cfg.rank_tol);
            double metric = 0.0;
            if (task == SweepTask::LinearMSE) {
                const Eigen::MatrixXd f_val = feature_matrix(basis, ys_val);
                const Eigen::MatrixXd rec = f_val * basis.omega * basis.sketched_outputs;
                metric = mse(rec, val_dense);
            } else {
                const CandidateSet cands = build_candidates(basis, candidates);
                const Eigen::MatrixXd f_val = feature_matrix(basis, ys_val);
                std::vector<int> ranks(ys_val.size());
                for (std::size_t i = 0; i < ys_val.size(); ++i) {
                    const Eigen::VectorXd scores =
                        candidate_scores(f_val.row(i).transpose(), cands, true);
                    ranks[i] = rank_of_truth(scores, val_candidate_indices[i]);
                }
                metric = retrieval_metrics(ranks).mrr;
            }
            row.per_replicate.push_back(metric);
        }
        const double reps = static_cast<double>(cfg.replicates);
        for (double v : row.per_replicate) row.mean_metric += v;
        row.mean_metric /= reps;
        if (cfg.replicates > 1) {
            double ss = 0.0;
            for (double v : row.per_replicate) ss += (v - row.mean_metric) * (v - row.mean_metric);
            row.std_metric = std::sqrt(ss / (reps - 1.0));
        }
        table.push_back(std::move(row));
    }
    return table;
}

std::vector<SweepRow> perfect_h_sweep(const KernelSpec& kernel,
                                      std::span<const StructuredOutput> ys_train,
                                      std::span<const StructuredOutput> ys_val,
                                      const std::vector<int>& ms, const SweepConfig& cfg) {
    return perfect_h_sweep(kernel, ys_train, ys_val, {}, {}, ms, SweepTask::LinearMSE, cfg);
}

int suggest_m(const std::vector<SweepRow>& table, bool lower_is_better, double tol) {
    if (table.empty()) throw std::invalid_argument("suggest_m: empty sweep table");
    double best = table[0].mean_metric;
    for (const auto& row : table)
        best = lower_is_better ? std::min(best, row.mean_metric) : std::max(best, row.mean_metric);
    for (const auto& row : table) {
        const bool ok = lower_is_better ? row.mean_metric <= best * (1.0 + tol)
                                        : row.mean_metric >= best * (1.0 - tol);
        if (ok) return row.m;
    }
    return table.back().m;
}

}  // namespace dsokr
