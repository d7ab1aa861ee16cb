#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dsokr/kernels.hpp"

namespace dsokr {

// Mean over rows of the squared Euclidean distance.
double mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth);

struct RetrievalMetrics {
    double mrr = 0.0;
    double hits_at_1 = 0.0;
    double hits_at_10 = 0.0;
    double mean_rank = 0.0;
};

// ranks are 1-based ranks of the true candidate.
RetrievalMetrics retrieval_metrics(const std::vector<int>& ranks_of_truth);

double mean_kernel_loss(const KernelSpec& spec, std::span<const StructuredOutput> preds,
                        std::span<const StructuredOutput> truths);

}  // namespace dsokr
