#pragma once

#include <string>
#include <vector>

#include "hexinject/circuit.hpp"

namespace hexinject {

struct GraphEdge {
    uint32_t u = 0;
    uint32_t v = 0;  // may equal DetectorGraph::kBoundary
    double prob = 0;
    double weight = 0;
    bool flips_observable = false;
};

// Matching graph over the Stage II detectors of a noisy circuit. Stage I
// detectors never appear here; they are post-selection gates.
struct DetectorGraph {
    static constexpr uint32_t kBoundary = 0xffffffffu;

    uint32_t node_count = 0;
    std::vector<uint32_t> det_of_node;  // node -> circuit detector index
    std::vector<int32_t> node_of_det;   // circuit detector index -> node or -1
    std::vector<GraphEdge> edges;

    double total_mass = 0;         // summed probability of all mechanisms
    double dropped_mass = 0;       // mechanisms that failed to decompose
    double undetectable_mass = 0;  // observable flips with empty signature
    double rejected_mass = 0;      // mechanisms vetoed by Stage I post-selection

    std::string dump() const;  // one line per edge `u v|B weight prob flip`
    bool boundary_connected() const;
};

DetectorGraph build_graph(const Circuit& noisy_circuit);

}  // namespace hexinject
