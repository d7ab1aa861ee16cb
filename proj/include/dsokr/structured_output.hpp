#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dsokr {

// Binary substructure-indicator vector.
struct Fingerprint {
    std::vector<std::uint8_t> bits;

    int popcount() const {
        int c = 0;
        for (auto b : bits) c += b ? 1 : 0;
        return c;
    }
    bool operator==(const Fingerprint&) const = default;
};

// Undirected graph with integer node labels and optional integer edge labels.
// Node indices are 0..|V|-1; no self-loops, no duplicate edges.
struct LabeledGraph {
    struct Edge {
        int u = 0;
        int v = 0;
        std::optional<int> label;
        bool operator==(const Edge&) const = default;
    };

    std::vector<int> node_labels;
    std::vector<Edge> edges;

    int num_nodes() const { return static_cast<int>(node_labels.size()); }

    // Throws std::invalid_argument on self-loops, duplicate edges, or
    // out-of-range endpoints.
    void validate() const;

    std::vector<std::vector<int>> adjacency() const;

    // All-pairs shortest-path lengths by BFS per node; -1 for unreachable.
    std::vector<std::vector<int>> shortest_path_lengths() const;

    bool operator==(const LabeledGraph&) const = default;
};

using StructuredOutput = std::variant<Eigen::VectorXd, Fingerprint, LabeledGraph>;

inline bool is_vector(const StructuredOutput& y) { return std::holds_alternative<Eigen::VectorXd>(y); }
inline bool is_fingerprint(const StructuredOutput& y) { return std::holds_alternative<Fingerprint>(y); }
inline bool is_graph(const StructuredOutput& y) { return std::holds_alternative<LabeledGraph>(y); }

const char* variant_name(const StructuredOutput& y);

}  // namespace dsokr
