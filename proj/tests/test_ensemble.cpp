#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsokr/ensemble.hpp"
#include "dsokr/rng.hpp"

using namespace dsokr;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(v.size());
    int i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

std::vector<Eigen::VectorXd> random_scores(int t, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Eigen::VectorXd> s(t, Eigen::VectorXd(n));
    for (auto& v : s)
        for (int i = 0; i < n; ++i) v(i) = rng.normal();
    return s;
}

}  // namespace

TEST_CASE("fractional ranks: frozen tie example") {
    // scores 3,1,3,2 descending: the two 3s share positions 1-2 -> 1.5
    const Eigen::VectorXd r = fractional_ranks(vec({3, 1, 3, 2}));
    CHECK(r(0) == doctest::Approx(1.5));
    CHECK(r(1) == doctest::Approx(4.0));
    CHECK(r(2) == doctest::Approx(1.5));
    CHECK(r(3) == doctest::Approx(3.0));
    // ranks always sum to n(n+1)/2
    CHECK(r.sum() == doctest::Approx(10.0));
}

TEST_CASE("all-tied scores share the mean rank") {
    const Eigen::VectorXd r = fractional_ranks(vec({2, 2, 2}));
    for (int i = 0; i < 3; ++i) CHECK(r(i) == doctest::Approx(2.0));
}

TEST_CASE("single-model aggregation reproduces the model ranking in every mode") {
    const auto scores = random_scores(1, 30, 1);
    std::vector<int> expected(30);
    std::iota(expected.begin(), expected.end(), 0);
    std::stable_sort(expected.begin(), expected.end(),
                     [&](int a, int b) { return scores[0](a) > scores[0](b); });
    for (AggregationMode mode :
         {AggregationMode::RankSum, AggregationMode::ScoreAverage, AggregationMode::ScoreMax})
        CHECK(aggregate(mode, scores) == expected);
}

TEST_CASE("rank-sum is invariant to strictly monotone per-model rescaling") {
    auto scores = random_scores(3, 25, 2);
    const auto base = aggregate(AggregationMode::RankSum, scores);
    auto rescaled = scores;
    rescaled[0] = scores[0].array().exp();          // strictly increasing
    rescaled[1] = 5.0 * scores[1].array() + 100.0;  // affine, positive slope
    rescaled[2] = scores[2].array().atan();         // strictly increasing
    CHECK(aggregate(AggregationMode::RankSum, rescaled) == base);
    // score-average is generally not invariant under such rescaling
    const auto avg = aggregate(AggregationMode::ScoreAverage, scores);
    const auto avg2 = aggregate(AggregationMode::ScoreAverage, rescaled);
    CHECK(avg != avg2);
}

TEST_CASE("score-average obeys the weighted mean") {
    std::vector<Eigen::VectorXd> s{vec({1, 0, 0}), vec({0, 0, 1})};
    // weights 0.8/0.2 -> keys (0.8, 0, 0.2): candidate 0 first, then 2, then 1
    CHECK(aggregate(AggregationMode::ScoreAverage, s, {0.8, 0.2}) == std::vector<int>{0, 2, 1});
    CHECK(aggregate(AggregationMode::ScoreAverage, s, {0.2, 0.8}) == std::vector<int>{2, 0, 1});
}

TEST_CASE("score-max keeps the strongest weighted vote") {
    std::vector<Eigen::VectorXd> s{vec({5, 0, 1}), vec({0, 4, 1})};
    CHECK(aggregate(AggregationMode::ScoreMax, s) == std::vector<int>{0, 1, 2});
}

TEST_CASE("rank-sum favors consistently good candidates") {
    // candidate 1 is second for both models (rank sum 4); the winners of the
    // two models drop to ranks 4 and 3 on the other model
    std::vector<Eigen::VectorXd> s{vec({10, 9, 1, 0}), vec({0, 9, 10, 1})};
    const auto order = aggregate(AggregationMode::RankSum, s);
    CHECK(order[0] == 1);
    CHECK(order[3] == 3);
}

TEST_CASE("weight validation") {
    const auto scores = random_scores(2, 5, 3);
    CHECK_THROWS_AS(aggregate(AggregationMode::RankSum, scores, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(aggregate(AggregationMode::RankSum, scores, {0.7, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(aggregate(AggregationMode::RankSum, scores, {1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(aggregate(AggregationMode::RankSum, std::vector<Eigen::VectorXd>{}),
                    std::invalid_argument);
    auto mixed = scores;
    mixed[1] = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(aggregate(AggregationMode::RankSum, mixed), std::invalid_argument);
}

TEST_CASE("mode names round-trip") {
    for (AggregationMode m :
         {AggregationMode::RankSum, AggregationMode::ScoreAverage, AggregationMode::ScoreMax})
        CHECK(aggregation_mode_from_name(aggregation_mode_name(m)) == m);
    CHECK_THROWS_AS(aggregation_mode_from_name("borda"), std::invalid_argument);
}
