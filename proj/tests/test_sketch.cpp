#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "dsokr/rng.hpp"
#include "dsokr/sketch.hpp"

using namespace dsokr;

namespace {

Eigen::MatrixXd random_psd(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    return a * a.transpose() / n;
}

Eigen::VectorXd random_vec(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

}  // namespace

TEST_CASE("fixed tuples reproduce byte-identical sketches") {
    for (SketchKind kind : {SketchKind::SubSample, SketchKind::Gaussian, SketchKind::PSparsified}) {
        const auto a = SketchMatrix::draw(kind, 40, 10, 99);
        const auto b = SketchMatrix::draw(kind, 40, 10, 99);
        const auto c = SketchMatrix::draw(kind, 40, 10, 100);
        CHECK((a.dense() - b.dense()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.dense() - c.dense()).cwiseAbs().maxCoeff() > 0.0);
    }
}

TEST_CASE("sub-sample rows are distinct unscaled identity rows") {
    const auto r = SketchMatrix::draw(SketchKind::SubSample, 30, 12, 5);
    const Eigen::MatrixXd d = r.dense();
    CHECK(d.rows() == 12);
    CHECK(d.cols() == 30);
    std::set<int> seen;
    for (int i = 0; i < 12; ++i) {
        CHECK(d.row(i).sum() == 1.0);
        CHECK(d.row(i).maxCoeff() == 1.0);
        seen.insert(r.indices()[i]);
        CHECK(d(i, r.indices()[i]) == 1.0);
    }
    CHECK(seen.size() == 12);
    CHECK_THROWS_AS(SketchMatrix::draw(SketchKind::SubSample, 5, 6, 0), std::invalid_argument);
}

TEST_CASE("gaussian sketch entries have variance 1/m") {
    const int n = 400, m = 50;
    const auto r = SketchMatrix::draw(SketchKind::Gaussian, n, m, 7);
    const Eigen::MatrixXd d = r.dense();
    CHECK(std::abs(d.mean()) < 0.002);
    CHECK(d.array().square().mean() == doctest::Approx(1.0 / m).epsilon(0.03));
}

TEST_CASE("p-sparsified sketch: density q, nonzero variance 1/(m q), no empty rows") {
    const int n = 300, m = 40;
    const double q = 0.1;
    const auto r = SketchMatrix::draw(SketchKind::PSparsified, n, m, 11, q);
    const Eigen::MatrixXd d = r.dense();
    int nnz = 0;
    double sum2 = 0.0;
    for (int i = 0; i < m; ++i) {
        CHECK(d.row(i).cwiseAbs().maxCoeff() > 0.0);  // redrawn until nonempty
        for (int j = 0; j < n; ++j) {
            if (d(i, j) != 0.0) {
                ++nnz;
                sum2 += d(i, j) * d(i, j);
            }
        }
    }
    CHECK(static_cast<double>(nnz) / (n * m) == doctest::Approx(q).epsilon(0.1));
    CHECK(sum2 / nnz == doctest::Approx(1.0 / (m * q)).epsilon(0.1));
    CHECK_THROWS_AS(SketchMatrix::draw(SketchKind::PSparsified, 10, 5, 0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(SketchMatrix::draw(SketchKind::PSparsified, 10, 5, 0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("sketch_gram equals R K R^T computed densely") {
    const Eigen::MatrixXd k = random_psd(35, 21);
    for (SketchKind kind : {SketchKind::SubSample, SketchKind::Gaussian, SketchKind::PSparsified}) {
        const auto r = SketchMatrix::draw(kind, 35, 9, 3);
        const Eigen::MatrixXd expected = r.dense() * k * r.dense().transpose();
        const Eigen::MatrixXd got = r.sketch_gram(k);
        CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((got - got.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("apply and apply_right agree with the dense matrix") {
    for (SketchKind kind : {SketchKind::SubSample, SketchKind::Gaussian, SketchKind::PSparsified}) {
        const auto r = SketchMatrix::draw(kind, 25, 8, 17);
        const Eigen::VectorXd v = random_vec(25, 1);
        CHECK((r.apply(v) - r.dense() * v).cwiseAbs().maxCoeff() < 1e-13);
        Eigen::MatrixXd a(4, 25);
        for (int i = 0; i < 4; ++i) a.row(i) = random_vec(25, 100 + i).transpose();
        CHECK((r.apply_right(a) - a * r.dense().transpose()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("sketches are linear maps") {
    const auto r = SketchMatrix::draw(SketchKind::PSparsified, 20, 6, 2);
    const Eigen::VectorXd v = random_vec(20, 8), w = random_vec(20, 9);
    CHECK((r.apply(2.5 * v + w) - (2.5 * r.apply(v) + r.apply(w))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kind names round-trip") {
    for (SketchKind k : {SketchKind::SubSample, SketchKind::Gaussian, SketchKind::PSparsified})
        CHECK(sketch_kind_from_name(sketch_kind_name(k)) == k);
    CHECK_THROWS_AS(sketch_kind_from_name("rademacher"), std::invalid_argument);
}
