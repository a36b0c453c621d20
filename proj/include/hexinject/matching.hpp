#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "hexinject/graph.hpp"

namespace hexinject {

struct Correction {
    // Matched pairs of fired-detector node ids; second = kBoundary for a
    // boundary match.
    std::vector<std::pair<uint32_t, uint32_t>> matches;
    bool predicted_flip = false;
    int64_t total_weight_scaled = 0;  // sum of matched path weights, fixed point
    double total_weight = 0;
};

// Exact minimum-weight perfect matching over the metric closure of the
// detector graph (all-pairs shortest paths, blossom matching, observable
// parity accumulated along the matched paths).
class MwpmDecoder {
  public:
    explicit MwpmDecoder(const DetectorGraph& graph, int threads = 1);

    Correction decode(const std::vector<uint32_t>& fired_nodes) const;
    // Exhaustive minimum over all pairings, |fired| <= 14.
    Correction brute_force_decode(const std::vector<uint32_t>& fired_nodes) const;

    const DetectorGraph& graph() const { return *graph_; }
    double distance(uint32_t a, uint32_t b) const;       // b may be kBoundary
    bool path_flips(uint32_t a, uint32_t b) const;

    static constexpr double kScale = 1048576.0;  // 2^20 fixed-point weights

  private:
    const DetectorGraph* graph_;
    uint32_t n_;  // node_count + 1 (boundary is node n_-1 internally)
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> adj_;  // (node, edge index)
    // Row-major [source][node] shortest-path data.
    std::vector<float> dist_;
    std::vector<uint64_t> parity_;  // bit-packed flips along shortest paths
    size_t parity_words_;

    void dijkstra(uint32_t src);
    int64_t scaled(double w) const { return std::llround(w * kScale); }
};

// Exact minimum-weight perfect matching on a dense graph: weights[i][j] < 0
// marks a forbidden pair. Returns the mate of each vertex. Used by the
// decoder and directly unit-tested against brute force.
std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int64_t>>& weights);

}  // namespace hexinject
