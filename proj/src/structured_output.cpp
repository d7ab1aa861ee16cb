#include "dsokr/structured_output.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace dsokr {

void LabeledGraph::validate() const {
    const int n = num_nodes();
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("graph edge endpoint out of range: (" + std::to_string(e.u) +
                                        ", " + std::to_string(e.v) + ")");
        if (e.u == e.v)
            throw std::invalid_argument("graph has self-loop at node " + std::to_string(e.u));
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            throw std::invalid_argument("graph has duplicate edge (" + std::to_string(key.first) +
                                        ", " + std::to_string(key.second) + ")");
    }
}

std::vector<std::vector<int>> LabeledGraph::adjacency() const {
    std::vector<std::vector<int>> adj(num_nodes());
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

std::vector<std::vector<int>> LabeledGraph::shortest_path_lengths() const {
    const int n = num_nodes();
    const auto adj = adjacency();
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        dist[s][s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : adj[u]) {
                if (dist[s][v] < 0) {
                    dist[s][v] = dist[s][u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return dist;
}

const char* variant_name(const StructuredOutput& y) {
    if (is_vector(y)) return "dense-vector";
    if (is_fingerprint(y)) return "fingerprint";
    return "labeled-graph";
}

}  // namespace dsokr
