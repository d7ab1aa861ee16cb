#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dsokr {

enum class AggregationMode { RankSum, ScoreAverage, ScoreMax };

const char* aggregation_mode_name(AggregationMode mode);
AggregationMode aggregation_mode_from_name(const std::string& name);

// 1-based fractional ranks by descending score; ties share the mean rank of
// their tie group.
Eigen::VectorXd fractional_ranks(const Eigen::VectorXd& scores);

// Aggregate T models' candidate scores into one final ranking (best first).
// RankSum sorts ascending by the weighted sum of per-model fractional
// ranks; ScoreAverage / ScoreMax sort descending by the weighted mean /
// elementwise max of the scores. Ties break to the lowest candidate index.
// weights must be non-negative and sum to 1 within 1e-9.
std::vector<int> aggregate(AggregationMode mode, const std::vector<Eigen::VectorXd>& per_model_scores,
                           const std::vector<double>& weights);

// Uniform weights 1/T.
std::vector<int> aggregate(AggregationMode mode, const std::vector<Eigen::VectorXd>& per_model_scores);

}  // namespace dsokr
