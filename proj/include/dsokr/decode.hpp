#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "dsokr/basis.hpp"

namespace dsokr {

// Candidate outputs with their precomputed sketched features.
struct CandidateSet {
    std::vector<StructuredOutput> outputs;
    Eigen::MatrixXd features;      // n_c x p
    Eigen::VectorXd self_kernels;  // k(y_j, y_j), for the unnormalized decode path
    bool kernel_normalized = false;

    int size() const { return static_cast<int>(outputs.size()); }
};

CandidateSet build_candidates(const SketchedBasis& basis, std::span<const StructuredOutput> outputs);

// Candidate scores for predicted coefficients z. Normalized kernel:
// z^T psi(y_j). Unnormalized kernels change the argmin/argmax equivalence,
// so they are refused unless allow_unnormalized is set, in which case the
// negated full expression k(y,y) - 2 z^T psi(y) is used.
Eigen::VectorXd candidate_scores(const Eigen::VectorXd& z, const CandidateSet& cands,
                                 bool allow_unnormalized = false);

// (argmax index, winning score); ties break to the lowest index.
std::pair<int, double> decode(const Eigen::VectorXd& z, const CandidateSet& cands,
                              bool allow_unnormalized = false);

// Candidate indices by descending score, stable on ties.
std::vector<int> rank_candidates(const Eigen::VectorXd& z, const CandidateSet& cands,
                                 bool allow_unnormalized = false);

// 1-based rank of candidate `truth_index` under `scores`; tied candidates
// all receive the worst rank of the tie group (pessimistic).
int rank_of_truth(const Eigen::VectorXd& scores, int truth_index);

}  // namespace dsokr
