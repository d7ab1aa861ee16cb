#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "dsokr/basis.hpp"
#include "dsokr/kernels.hpp"
#include "dsokr/sketch.hpp"

namespace dsokr {

// Nystrom-approximated ridge leverage scores, sorted descending. n_s
// columns are sampled uniformly without replacement; with n_s = n the
// result equals the exact diag(K (K + n lambda I)^{-1}).
Eigen::VectorXd approximate_leverage_scores(const Eigen::MatrixXd& k, double lambda, int n_s,
                                            std::uint64_t seed);

Eigen::VectorXd approximate_leverage_scores(const KernelSpec& kernel,
                                            std::span<const StructuredOutput> ys, double lambda,
                                            int n_s, std::uint64_t seed);

enum class SweepTask { LinearMSE, CandidateRanking };

struct SweepRow {
    int m = 0;
    double mean_metric = 0.0;
    double std_metric = 0.0;
    std::vector<double> per_replicate;
};

struct SweepConfig {
    SketchKind sketch_kind = SketchKind::SubSample;
    std::uint64_t seed = 0;
    int replicates = 5;
    double rank_tol = 1e-10;
    double sparsity = 0.1;  // PSparsified q
};

// Perfect-h sketch-size sweep: for each m and replicate, draw a sketch
// (seed + replicate), fit a basis, and score the oracle surrogate that
// replaces g_W(x) by psi(y_true).
//   LinearMSE: MSE between reconstruct_linear(psi(y)) and y over ys_val.
//   CandidateRanking: MRR of the true candidate; ys_val entries are given
//   by their index into `candidates`.
std::vector<SweepRow> perfect_h_sweep(const KernelSpec& kernel,
                                      std::span<const StructuredOutput> ys_train,
                                      std::span<const StructuredOutput> ys_val,
                                      const std::vector<int>& val_candidate_indices,
                                      std::span<const StructuredOutput> candidates,
                                      const std::vector<int>& ms, SweepTask task,
                                      const SweepConfig& cfg);

// LinearMSE convenience overload.
std::vector<SweepRow> perfect_h_sweep(const KernelSpec& kernel,
                                      std::span<const StructuredOutput> ys_train,
                                      std::span<const StructuredOutput> ys_val,
                                      const std::vector<int>& ms, const SweepConfig& cfg);

// Smallest m whose mean metric is within a relative tolerance of the best
// across the sweep (<= best*(1+tol) when lower is better, >= best*(1-tol)
// otherwise).
int suggest_m(const std::vector<SweepRow>& table, bool lower_is_better, double tol = 0.05);

}  // namespace dsokr
