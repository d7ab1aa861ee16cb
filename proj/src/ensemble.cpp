#include "dsokr/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dsokr {

const char* aggregation_mode_name(AggregationMode mode) {
    switch (mode) {
        case AggregationMode::RankSum: return "rank-sum";
        case AggregationMode::ScoreAverage: return "score-average";
        case AggregationMode::ScoreMax: return "score-max";
    }
    return "?";
}

AggregationMode aggregation_mode_from_name(const std::string& name) {
    for (AggregationMode m :
         {AggregationMode::RankSum, AggregationMode::ScoreAverage, AggregationMode::ScoreMax})
        if (name == aggregation_mode_name(m)) return m;
    throw std::invalid_argument("unknown aggregation mode: " + name);
}

Eigen::VectorXd fractional_ranks(const Eigen::VectorXd& scores) {
    const int n = static_cast<int>(scores.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores(a) > scores(b); });
    Eigen::VectorXd ranks(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && scores(order[j]) == scores(order[i])) ++j;
        const double mean_rank = (i + 1 + j) / 2.0;  // mean of 1-based positions i+1..j
        for (int k = i; k < j; ++k) ranks(order[k]) = mean_rank;
        i = j;
    }
    return ranks;
}

std::vector<int> aggregate(AggregationMode mode, const std::vector<Eigen::VectorXd>& per_model_scores,
                           const std::vector<double>& weights) {
    const std::size_t t = per_model_scores.size();
    if (t == 0) throw std::invalid_argument("aggregate: need at least one model");
    if (weights.size() != t) throw std::invalid_argument("aggregate: one weight per model required");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("aggregate: weights must be non-negative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw std::invalid_argument("aggregate: weights must sum to 1");
    const Eigen::Index n_c = per_model_scores[0].size();
    for (const auto& s : per_model_scores)
        if (s.size() != n_c) throw std::invalid_argument("aggregate: candidate count mismatch");

    Eigen::VectorXd key(n_c);
    switch (mode) {
        case AggregationMode::RankSum: {
            key.setZero();
            for (std::size_t m = 0; m < t; ++m) key -= weights[m] * fractional_ranks(per_model_scores[m]);
            break;  // negated: lower weighted rank sum is better
        }
        case AggregationMode::ScoreAverage: {
            key.setZero();
            for (std::size_t m = 0; m < t; ++m) key += weights[m] * per_model_scores[m];
            break;
        }
        case AggregationMode::ScoreMax: {
            key = weights[0] * per_model_scores[0];
            for (std::size_t m = 1; m < t; ++m) key = key.cwiseMax(weights[m] * per_model_scores[m]);
            break;
        }
    }
    std::vector<int> order(n_c);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) > key(b); });
    return order;
}

std::vector<int> aggregate(AggregationMode mode, const std::vector<Eigen::VectorXd>& per_model_scores) {
    return aggregate(mode, per_model_scores,
                     std::vector<double>(per_model_scores.size(), 1.0 / per_model_scores.size()));
}

}  // namespace dsokr
