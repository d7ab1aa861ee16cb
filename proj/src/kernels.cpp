#include "dsokr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace dsokr {

namespace {

using SparseFeatures = std::unordered_map<int, double>;

double sparse_dot(const SparseFeatures& a, const SparseFeatures& b) {
    const SparseFeatures& small = a.size() <= b.size() ? a : b;
    const SparseFeatures& large = a.size() <= b.size() ? b : a;
    double s = 0.0;
    for (const auto& [idx, val] : small) {
        auto it = large.find(idx);
        if (it != large.end()) s += val * it->second;
    }
    return s;
}

void check_spec(const KernelSpec& spec) {
    if (spec.kind == KernelKind::Gaussian && spec.gamma <= 0.0)
        throw std::invalid_argument("Gaussian kernel requires gamma > 0");
    if (spec.kind == KernelKind::WLSubtree && spec.wl_iterations < 0)
        throw std::invalid_argument("WLSubtree kernel requires h >= 0");
}

void check_compatible(const KernelSpec& spec, const StructuredOutput& y) {
    const bool ok = is_graph_kernel(spec.kind) ? is_graph(y)
                    : spec.kind == KernelKind::Tanimoto ? is_fingerprint(y)
                                                        : is_vector(y);
    if (!ok)
        throw std::invalid_argument(std::string("kernel ") + kernel_kind_name(spec.kind) +
                                    " is incompatible with " + variant_name(y) + " outputs");
}

Eigen::MatrixXd stack_vectors(const KernelSpec& spec, std::span<const StructuredOutput> ys) {
    if (ys.empty()) return Eigen::MatrixXd(0, 0);
    const auto d = std::get<Eigen::VectorXd>(ys[0]).size();
    Eigen::MatrixXd m(ys.size(), d);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        check_compatible(spec, ys[i]);
        const auto& v = std::get<Eigen::VectorXd>(ys[i]);
        if (v.size() != d) throw std::invalid_argument("dense outputs have inconsistent dimensions");
        m.row(i) = v.transpose();
    }
    return m;
}

std::vector<SparseFeatures> vh_features(const std::vector<std::vector<int>>& labels,
                                        std::map<int, int>& dict, int dict_offset) {
    std::vector<SparseFeatures> feats(labels.size());
    for (std::size_t g = 0; g < labels.size(); ++g) {
        for (int lab : labels[g]) {
            auto [it, _] = dict.try_emplace(lab, dict_offset + static_cast<int>(dict.size()));
            feats[g][it->second] += 1.0;
        }
    }
    return feats;
}

// Shortest-path Dirac features: one count per (source label, target label,
// path length) triple over all ordered node pairs u != v with a finite
// distance.
std::vector<SparseFeatures> sp_features(const std::vector<LabeledGraph>& graphs) {
    std::map<std::tuple<int, int, int>, int> dict;
    std::vector<SparseFeatures> feats(graphs.size());
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        const auto& graph = graphs[g];
        graph.validate();
        const auto dist = graph.shortest_path_lengths();
        const int n = graph.num_nodes();
        for (int u = 0; u < n; ++u) {
            for (int v = 0; v < n; ++v) {
                if (u == v || dist[u][v] < 0) continue;
                auto key = std::make_tuple(graph.node_labels[u], graph.node_labels[v], dist[u][v]);
                auto [it, _] = dict.try_emplace(key, static_cast<int>(dict.size()));
                feats[g][it->second] += 1.0;
            }
        }
    }
    return feats;
}

std::vector<const LabeledGraph*> as_graphs(const KernelSpec& spec, std::span<const StructuredOutput> ys) {
    std::vector<const LabeledGraph*> out;
    out.reserve(ys.size());
    for (const auto& y : ys) {
        check_compatible(spec, y);
        out.push_back(&std::get<LabeledGraph>(y));
    }
    return out;
}

// Feature maps whose pairwise dot products realize the raw (unnormalized)
// graph kernel; the dictionary is shared across the whole batch.
std::vector<SparseFeatures> graph_features(const KernelSpec& spec, std::span<const StructuredOutput> ys) {
    std::vector<LabeledGraph> graphs;
    graphs.reserve(ys.size());
    for (const auto* g : as_graphs(spec, ys)) graphs.push_back(*g);

    if (spec.kind == KernelKind::ShortestPath) return sp_features(graphs);

    const int h = spec.kind == KernelKind::VertexHistogram ? 0 : spec.wl_iterations;
    const auto iterations = wl_relabel(graphs, h);
    std::vector<SparseFeatures> feats(graphs.size());
    int offset = 0;
    for (const auto& labels : iterations) {
        std::map<int, int> dict;
        auto part = vh_features(labels, dict, offset);
        for (std::size_t g = 0; g < feats.size(); ++g)
            for (const auto& [idx, val] : part[g]) feats[g][idx] += val;
        offset += static_cast<int>(dict.size());
    }
    return feats;
}

double tanimoto_raw(const Fingerprint& a, const Fingerprint& b) {
    if (a.bits.size() != b.bits.size())
        throw std::invalid_argument("fingerprints have different lengths");
    int inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool ba = a.bits[i] != 0, bb = b.bits[i] != 0;
        inter += (ba && bb) ? 1 : 0;
        uni += (ba || bb) ? 1 : 0;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

Eigen::MatrixXd raw_cross(const KernelSpec& spec, std::span<const StructuredOutput> ys,
                          std::span<const StructuredOutput> ys2) {
    const auto n = static_cast<Eigen::Index>(ys.size());
    const auto n2 = static_cast<Eigen::Index>(ys2.size());
    Eigen::MatrixXd k(n, n2);
    switch (spec.kind) {
        case KernelKind::Linear:
        case KernelKind::Cosine: {
            Eigen::MatrixXd a = stack_vectors(spec, ys);
            Eigen::MatrixXd b = stack_vectors(spec, ys2);
            if (n == 0 || n2 == 0) return Eigen::MatrixXd::Zero(n, n2);
            if (a.cols() != b.cols()) throw std::invalid_argument("vector dimension mismatch");
            if (spec.kind == KernelKind::Cosine) {
                for (Eigen::MatrixXd* m : {&a, &b}) {
                    for (Eigen::Index i = 0; i < m->rows(); ++i) {
                        const double nrm = m->row(i).norm();
                        if (nrm == 0.0) throw std::domain_error("zero-norm input under Cosine kernel");
                        m->row(i) /= nrm;
                    }
                }
            }
            k = a * b.transpose();
            break;
        }
        case KernelKind::Gaussian: {
            const Eigen::MatrixXd a = stack_vectors(spec, ys);
            const Eigen::MatrixXd b = stack_vectors(spec, ys2);
            if (n == 0 || n2 == 0) return Eigen::MatrixXd::Zero(n, n2);
            if (a.cols() != b.cols()) throw std::invalid_argument("vector dimension mismatch");
            const Eigen::VectorXd sa = a.rowwise().squaredNorm();
            const Eigen::VectorXd sb = b.rowwise().squaredNorm();
            Eigen::MatrixXd d2 = sa.replicate(1, n2) + sb.transpose().replicate(n, 1) - 2.0 * a * b.transpose();
            k = (-spec.gamma * d2.cwiseMax(0.0)).array().exp();
            break;
        }
        case KernelKind::Tanimoto: {
            for (const auto& y : ys) check_compatible(spec, y);
            for (const auto& y : ys2) check_compatible(spec, y);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n2; ++j)
                    k(i, j) = tanimoto_raw(std::get<Fingerprint>(ys[i]), std::get<Fingerprint>(ys2[j]));
            break;
        }
        default: {
            // graph kernels: one shared dictionary over ys ++ ys2
            std::vector<StructuredOutput> all(ys.begin(), ys.end());
            all.insert(all.end(), ys2.begin(), ys2.end());
            const auto feats = graph_features(spec, all);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n2; ++j) k(i, j) = sparse_dot(feats[i], feats[n + j]);
            break;
        }
    }
    return k;
}

double raw_self(const KernelSpec& spec, const StructuredOutput& y) {
    const StructuredOutput arr[1] = {y};
    return raw_cross(spec, std::span<const StructuredOutput>(arr, 1),
                     std::span<const StructuredOutput>(arr, 1))(0, 0);
}

void check_positive_self(double kyy, const StructuredOutput& y) {
    if (kyy <= 0.0)
        throw std::domain_error(std::string("degenerate input: ") + variant_name(y) +
                                " output has non-positive self-kernel under normalization");
}

}  // namespace

const char* kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Gaussian: return "gaussian";
        case KernelKind::Cosine: return "cosine";
        case KernelKind::Tanimoto: return "tanimoto";
        case KernelKind::VertexHistogram: return "vertex-histogram";
        case KernelKind::WLSubtree: return "wl-subtree";
        case KernelKind::ShortestPath: return "shortest-path";
    }
    return "?";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    for (KernelKind k : {KernelKind::Linear, KernelKind::Gaussian, KernelKind::Cosine,
                         KernelKind::Tanimoto, KernelKind::VertexHistogram, KernelKind::WLSubtree,
                         KernelKind::ShortestPath}) {
        if (name == kernel_kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown kernel kind: " + name);
}

bool is_graph_kernel(KernelKind kind) {
    return kind == KernelKind::VertexHistogram || kind == KernelKind::WLSubtree ||
           kind == KernelKind::ShortestPath;
}

std::vector<std::vector<std::vector<int>>> wl_relabel(const std::vector<LabeledGraph>& graphs, int h) {
    if (h < 0) throw std::invalid_argument("wl_relabel requires h >= 0");
    std::vector<std::vector<std::vector<int>>> out;
    out.reserve(h + 1);
    std::vector<std::vector<int>> current;
    current.reserve(graphs.size());
    for (const auto& g : graphs) {
        g.validate();
        current.push_back(g.node_labels);
    }
    out.push_back(current);
    std::vector<std::vector<std::vector<int>>> adj;
    adj.reserve(graphs.size());
    for (const auto& g : graphs) adj.push_back(g.adjacency());
    for (int iter = 1; iter <= h; ++iter) {
        std::map<std::vector<int>, int> dict;  // (own label, sorted neighbor labels) -> new label
        std::vector<std::vector<int>> next(current.size());
        for (std::size_t g = 0; g < current.size(); ++g) {
            next[g].resize(current[g].size());
            for (std::size_t v = 0; v < current[g].size(); ++v) {
                std::vector<int> key{current[g][v]};
                std::vector<int> nb;
                for (int u : adj[g][v]) nb.push_back(current[g][u]);
                std::sort(nb.begin(), nb.end());
                key.insert(key.end(), nb.begin(), nb.end());
                auto [it, _] = dict.try_emplace(std::move(key), static_cast<int>(dict.size()));
                next[g][v] = it->second;
            }
        }
        out.push_back(next);
        current = std::move(next);
    }
    return out;
}

double eval(const KernelSpec& spec, const StructuredOutput& y, const StructuredOutput& y2) {
    check_spec(spec);
    check_compatible(spec, y);
    check_compatible(spec, y2);
    const StructuredOutput a[1] = {y};
    const StructuredOutput b[1] = {y2};
    const double k = raw_cross(spec, {a, 1}, {b, 1})(0, 0);
    if (!spec.normalize) return k;
    const double kyy = raw_self(spec, y);
    const double k22 = raw_self(spec, y2);
    check_positive_self(kyy, y);
    check_positive_self(k22, y2);
    return k / std::sqrt(kyy * k22);
}

Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const StructuredOutput> ys) {
    check_spec(spec);
    Eigen::MatrixXd k = raw_cross(spec, ys, ys);
    // enforce exact symmetry against accumulation-order noise
    k = ((k + k.transpose()) / 2.0).eval();
    if (spec.normalize) {
        const Eigen::VectorXd d = k.diagonal();
        for (Eigen::Index i = 0; i < d.size(); ++i) check_positive_self(d(i), ys[i]);
        const Eigen::VectorXd inv = d.cwiseSqrt().cwiseInverse();
        k = inv.asDiagonal() * k * inv.asDiagonal();
        k = ((k + k.transpose()) / 2.0).eval();  // scaling reintroduces rounding asymmetry
        k.diagonal().setOnes();
    }
    return k;
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, std::span<const StructuredOutput> ys,
                           std::span<const StructuredOutput> ys2) {
    check_spec(spec);
    Eigen::MatrixXd k = raw_cross(spec, ys, ys2);
    if (spec.normalize) {
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
            const double kyy = raw_self(spec, ys[i]);
            check_positive_self(kyy, ys[i]);
            k.row(i) /= std::sqrt(kyy);
        }
        for (Eigen::Index j = 0; j < k.cols(); ++j) {
            const double kyy = raw_self(spec, ys2[j]);
            check_positive_self(kyy, ys2[j]);
            k.col(j) /= std::sqrt(kyy);
        }
    }
    return k;
}

double kernel_loss(const KernelSpec& spec, const StructuredOutput& y, const StructuredOutput& y2) {
    return eval(spec, y, y) - 2.0 * eval(spec, y, y2) + eval(spec, y2, y2);
}

}  // namespace dsokr
