#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dsokr/structured_output.hpp"

namespace dsokr {

enum class KernelKind { Linear, Gaussian, Cosine, Tanimoto, VertexHistogram, WLSubtree, ShortestPath };

// Output kernel configuration. `normalize` applies cosine normalization
// k(y,y') / sqrt(k(y,y) k(y',y')); outputs with zero self-kernel are then
// rejected as degenerate (std::domain_error) instead of silently mapped to 0.
struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    double gamma = 1.0;     // Gaussian only, > 0
    int wl_iterations = 3;  // WLSubtree only, >= 0
    bool normalize = false;
};

const char* kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

bool is_graph_kernel(KernelKind kind);

// Single kernel evaluation. Symmetric; throws std::invalid_argument on a
// variant/spec mismatch and std::domain_error on degenerate inputs.
double eval(const KernelSpec& spec, const StructuredOutput& y, const StructuredOutput& y2);

// n x n symmetric Gram matrix.
Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const StructuredOutput> ys);

// |ys| x |ys2| rectangular kernel matrix.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, std::span<const StructuredOutput> ys,
                           std::span<const StructuredOutput> ys2);

// Kernel-induced squared loss k(y,y) - 2 k(y,y') + k(y',y').
double kernel_loss(const KernelSpec& spec, const StructuredOutput& y, const StructuredOutput& y2);

// Weisfeiler-Lehman relabeling. Result[i][g] holds the labels of graph g at
// iteration i (i = 0 returns the original labels). The compression
// dictionary is shared across all graphs in the call and assigns new labels
// in first-encounter order (graphs in input order, nodes in index order),
// so results are byte-reproducible.
std::vector<std::vector<std::vector<int>>> wl_relabel(const std::vector<LabeledGraph>& graphs, int h);

}  // namespace dsokr
