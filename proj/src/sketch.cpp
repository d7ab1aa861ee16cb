#include "dsokr/sketch.hpp"

#include <cmath>
#include <stdexcept>

#include "dsokr/rng.hpp"

namespace dsokr {

const char* sketch_kind_name(SketchKind kind) {
    switch (kind) {
        case SketchKind::SubSample: return "sub-sample";
        case SketchKind::Gaussian: return "gaussian";
        case SketchKind::PSparsified: return "p-sparsified";
    }
    return "?";
}

SketchKind sketch_kind_from_name(const std::string& name) {
    for (SketchKind k : {SketchKind::SubSample, SketchKind::Gaussian, SketchKind::PSparsified})
        if (name == sketch_kind_name(k)) return k;
    throw std::invalid_argument("unknown sketch kind: " + name);
}

SketchMatrix SketchMatrix::draw(SketchKind kind, int n, int m, std::uint64_t seed, double q) {
    if (m < 1) throw std::invalid_argument("sketch requires m >= 1");
    if (n < 1) throw std::invalid_argument("sketch requires n >= 1");
    SketchMatrix r;
    r.kind_ = kind;
    r.m_ = m;
    r.n_ = n;
    r.seed_ = seed;
    r.q_ = q;
    Rng rng(seed);
    switch (kind) {
        case SketchKind::SubSample: {
            if (m > n) throw std::invalid_argument("SubSample sketch requires m <= n");
            r.indices_ = rng.sample_without_replacement(n, m);
            break;
        }
        case SketchKind::Gaussian: {
            r.dense_.resize(m, n);
            const double sd = 1.0 / std::sqrt(static_cast<double>(m));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) r.dense_(i, j) = sd * rng.normal();
            break;
        }
        case SketchKind::PSparsified: {
            if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("PSparsified requires q in (0, 1]");
            const double sd = 1.0 / std::sqrt(static_cast<double>(m) * q);
            std::vector<Eigen::Triplet<double>> triplets;
            for (int i = 0; i < m; ++i) {
                std::vector<Eigen::Triplet<double>> row;
                do {
                    row.clear();
                    for (int j = 0; j < n; ++j)
                        if (rng.uniform() < q) row.emplace_back(i, j, sd * rng.normal());
                } while (row.empty());
                triplets.insert(triplets.end(), row.begin(), row.end());
            }
            r.sparse_.resize(m, n);
            r.sparse_.setFromTriplets(triplets.begin(), triplets.end());
            break;
        }
    }
    return r;
}

Eigen::MatrixXd SketchMatrix::sketch_gram(const Eigen::MatrixXd& k) const {
    if (k.rows() != n_ || k.cols() != n_)
        throw std::invalid_argument("sketch_gram: Gram matrix dimension does not match sketch");
    Eigen::MatrixXd out;
    if (kind_ == SketchKind::SubSample) {
        out.resize(m_, m_);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) out(i, j) = k(indices_[i], indices_[j]);
        return out;
    }
    if (kind_ == SketchKind::Gaussian)
        out = dense_ * k * dense_.transpose();
    else
        out = sparse_ * k * Eigen::MatrixXd(sparse_.transpose());
    return ((out + out.transpose()) / 2.0).eval();
}

Eigen::VectorXd SketchMatrix::apply(const Eigen::VectorXd& v) const {
    if (v.size() != n_) throw std::invalid_argument("apply: vector length does not match sketch");
    if (kind_ == SketchKind::SubSample) {
        Eigen::VectorXd out(m_);
        for (int i = 0; i < m_; ++i) out(i) = v(indices_[i]);
        return out;
    }
    if (kind_ == SketchKind::Gaussian) return dense_ * v;
    return sparse_ * v;
}

Eigen::MatrixXd SketchMatrix::apply_right(const Eigen::MatrixXd& a) const {
    if (a.cols() != n_) throw std::invalid_argument("apply_right: column count does not match sketch");
    if (kind_ == SketchKind::SubSample) {
        Eigen::MatrixXd out(a.rows(), m_);
        for (int i = 0; i < m_; ++i) out.col(i) = a.col(indices_[i]);
        return out;
    }
    if (kind_ == SketchKind::Gaussian) return a * dense_.transpose();
    return a * sparse_.transpose();
}

Eigen::MatrixXd SketchMatrix::dense() const {
    if (kind_ == SketchKind::Gaussian) return dense_;
    if (kind_ == SketchKind::PSparsified) return Eigen::MatrixXd(sparse_);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, n_);
    for (int i = 0; i < m_; ++i) out(i, indices_[i]) = 1.0;
    return out;
}

}  // namespace dsokr
