#include "dsokr/decode.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dsokr {

CandidateSet build_candidates(const SketchedBasis& basis, std::span<const StructuredOutput> outputs) {
    if (outputs.empty()) throw std::invalid_argument("candidate set must be non-empty");
    CandidateSet c;
    c.outputs.assign(outputs.begin(), outputs.end());
    c.features = feature_matrix(basis, outputs);
    c.kernel_normalized = basis.kernel.normalize || basis.kernel.kind == KernelKind::Cosine ||
                          basis.kernel.kind == KernelKind::Gaussian;
    c.self_kernels.resize(c.size());
    for (int j = 0; j < c.size(); ++j) c.self_kernels(j) = eval(basis.kernel, outputs[j], outputs[j]);
    return c;
}

Eigen::VectorXd candidate_scores(const Eigen::VectorXd& z, const CandidateSet& cands,
                                 bool allow_unnormalized) {
    if (cands.size() == 0) throw std::invalid_argument("empty candidate set");
    if (z.size() != cands.features.cols())
        throw std::invalid_argument("decode: coefficient length does not match candidate features");
    if (!cands.kernel_normalized && !allow_unnormalized)
        throw std::invalid_argument(
            "decoding requires a normalized output kernel (or an explicit unnormalized override)");
    Eigen::VectorXd inner = cands.features * z;
    if (cands.kernel_normalized) return inner;
    return 2.0 * inner - cands.self_kernels;  // argmax of -(k(y,y) - 2 z.psi(y))
}

std::pair<int, double> decode(const Eigen::VectorXd& z, const CandidateSet& cands,
                              bool allow_unnormalized) {
    const Eigen::VectorXd scores = candidate_scores(z, cands, allow_unnormalized);
    int best = 0;
    for (int j = 1; j < scores.size(); ++j)
        if (scores(j) > scores(best)) best = j;
    return {best, scores(best)};
}

std::vector<int> rank_candidates(const Eigen::VectorXd& z, const CandidateSet& cands,
                                 bool allow_unnormalized) {
    const Eigen::VectorXd scores = candidate_scores(z, cands, allow_unnormalized);
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores(a) > scores(b); });
    return order;
}

int rank_of_truth(const Eigen::VectorXd& scores, int truth_index) {
    if (truth_index < 0 || truth_index >= scores.size())
        throw std::invalid_argument("rank_of_truth: index out of range");
    const double s = scores(truth_index);
    int rank = 0;
    for (int j = 0; j < scores.size(); ++j)
        if (scores(j) >= s) ++rank;  // ties count against the truth
    return rank;
}

}  // namespace dsokr
