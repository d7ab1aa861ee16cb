#include "dsokr/metrics.hpp"

#include <stdexcept>

namespace dsokr {

double mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
        throw std::invalid_argument("mse: shape mismatch");
    if (pred.rows() == 0) return 0.0;
    return (pred - truth).rowwise().squaredNorm().mean();
}

RetrievalMetrics retrieval_metrics(const std::vector<int>& ranks_of_truth) {
    RetrievalMetrics m;
    if (ranks_of_truth.empty()) return m;
    for (int r : ranks_of_truth) {
        if (r < 1) throw std::invalid_argument("retrieval_metrics: ranks must be >= 1");
        m.mrr += 1.0 / r;
        m.hits_at_1 += r <= 1 ? 1.0 : 0.0;
        m.hits_at_10 += r <= 10 ? 1.0 : 0.0;
        m.mean_rank += r;
    }
    const double n = static_cast<double>(ranks_of_truth.size());
    m.mrr /= n;
    m.hits_at_1 /= n;
    m.hits_at_10 /= n;
    m.mean_rank /= n;
    return m;
}

double mean_kernel_loss(const KernelSpec& spec, std::span<const StructuredOutput> preds,
                        std::span<const StructuredOutput> truths) {
    if (preds.size() != truths.size()) throw std::invalid_argument("mean_kernel_loss: length mismatch");
    if (preds.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) s += kernel_loss(spec, preds[i], truths[i]);
    return s / static_cast<double>(preds.size());
}

}  // namespace dsokr
