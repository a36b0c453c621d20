#include "hexinject/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hexinject/fault.hpp"

namespace hexinject {

namespace {

struct EdgeAccum {
    double q = 0;          // merged probability
    double flip_mass = 0;  // probability mass voting for an observable flip
    double mass = 0;
};

void merge(EdgeAccum& acc, double p, bool flips) {
    acc.q = acc.q * (1 - p) + p * (1 - acc.q);
    acc.mass += p;
    if (flips) acc.flip_mass += p;
}

}  // namespace

DetectorGraph build_graph(const Circuit& circuit) {
    if (!circuit.noise_attached)
        throw std::invalid_argument("build_graph requires a noisy circuit");
    DetectorGraph g;
    g.node_of_det.assign(circuit.detectors.size(), -1);
    for (uint32_t d = 0; d < circuit.detectors.size(); d++) {
        if (circuit.detectors[d].stage == Stage::StageII) {
            g.node_of_det[d] = (int32_t)g.det_of_node.size();
            g.det_of_node.push_back(d);
        }
    }
    g.node_count = (uint32_t)g.det_of_node.size();

    FaultPropagator prop(circuit);
    std::map<std::pair<uint32_t, uint32_t>, EdgeAccum> accum;

    auto classify = [&](const FaultEffect& eff, std::vector<uint32_t>* nodes, bool* vetoed) {
        nodes->clear();
        *vetoed = false;
        for (uint32_t d : eff.fired_detectors) {
            if (circuit.detectors[d].stage == Stage::StageI) {
                *vetoed = true;
                return;
            }
            nodes->push_back((uint32_t)g.node_of_det[d]);
        }
        std::sort(nodes->begin(), nodes->end());
    };

    auto add_mechanism = [&](const FaultEffect& eff, double p) {
        g.total_mass += p;
        std::vector<uint32_t> nodes;
        bool vetoed;
        classify(eff, &nodes, &vetoed);
        if (vetoed) {
            g.rejected_mass += p;
            return;
        }
        if (nodes.size() <= 2) {
            if (nodes.empty()) {
                if (eff.observable_flip) g.undetectable_mass += p;
                return;
            }
            uint32_t u = nodes[0];
            uint32_t v = nodes.size() == 2 ? nodes[1] : DetectorGraph::kBoundary;
            merge(accum[{u, v}], p, eff.observable_flip);
            return;
        }
        g.dropped_mass += p;
    };

    // A multi-detector mechanism may still decompose into per-qubit X and Z
    // factors that each look like an ordinary edge; fault effects are linear
    // over GF(2), so the components jointly reproduce the full signature.
    auto add_decomposed = [&](size_t loc, const SparsePauli& pauli, double p) {
        FaultEffect whole = prop.propagate(loc, pauli);
        g.total_mass += p;
        std::vector<uint32_t> nodes;
        bool vetoed;
        classify(whole, &nodes, &vetoed);
        if (vetoed) {
            g.rejected_mass += p;
            return;
        }
        if (nodes.size() <= 2) {
            if (nodes.empty()) {
                if (whole.observable_flip) g.undetectable_mass += p;
                return;
            }
            uint32_t u = nodes[0];
            uint32_t v = nodes.size() == 2 ? nodes[1] : DetectorGraph::kBoundary;
            merge(accum[{u, v}], p, whole.observable_flip);
            return;
        }
        std::vector<std::pair<std::vector<uint32_t>, bool>> parts;
        bool ok = true;
        for (const auto& [q, xz] : pauli.paulis) {
            for (int c = 0; c < 2; c++) {
                bool want_x = c == 0;
                if (!(want_x ? xz.first : xz.second)) continue;
                SparsePauli comp;
                comp.mult(q, want_x, !want_x);
                FaultEffect eff = prop.propagate(loc, comp);
                std::vector<uint32_t> cn;
                bool cv;
                classify(eff, &cn, &cv);
                if (cn.empty() && !eff.observable_flip) continue;  // identity component
                if (cv || cn.size() > 2 || cn.empty()) {
                    ok = false;
                    break;
                }
                parts.push_back({cn, eff.observable_flip});
            }
            if (!ok) break;
        }
        if (!ok) {
            g.dropped_mass += p;
            return;
        }
        for (const auto& [cn, flip] : parts) {
            uint32_t u = cn[0];
            uint32_t v = cn.size() == 2 ? cn[1] : DetectorGraph::kBoundary;
            merge(accum[{u, v}], p, flip);
        }
    };

    for (size_t i = 0; i < circuit.instructions.size(); i++) {
        const auto& in = circuit.instructions[i];
        if (in.op == Op::ReadoutFlip) {
            if (in.prob > 0) add_mechanism(prop.record_flip(i), in.prob);
        } else if (in.op == Op::Noise1) {
            const auto& ch = circuit.channels1[in.chan];
            const double ps[3] = {ch.px, ch.py, ch.pz};
            for (int k = 0; k < 3; k++) {
                if (ps[k] <= 0) continue;
                SparsePauli p;
                p.mult(in.a, k != 2, k != 0);
                add_decomposed(i, p, ps[k]);
            }
        } else if (in.op == Op::Noise2) {
            const auto& ch = circuit.channels2[in.chan];
            for (int k = 0; k < 15; k++) {
                if (ch.p[k] <= 0) continue;
                int pa = (k + 1) / 4, pb = (k + 1) % 4;
                SparsePauli p;
                if (pa) p.mult(in.a, pa != 3, pa != 1);
                if (pb) p.mult(in.b, pb != 3, pb != 1);
                add_decomposed(i, p, ch.p[k]);
            }
        }
    }

    for (const auto& [key, acc] : accum) {
        GraphEdge e;
        e.u = key.first;
        e.v = key.second;
        e.prob = std::min(acc.q, 0.5);
        e.weight = std::log((1 - e.prob) / e.prob);
        e.flips_observable = acc.flip_mass * 2 > acc.mass;
        g.edges.push_back(e);
    }
    return g;
}

std::string DetectorGraph::dump() const {
    std::vector<const GraphEdge*> es;
    for (const auto& e : edges) es.push_back(&e);
    std::sort(es.begin(), es.end(), [](const GraphEdge* a, const GraphEdge* b) {
        if (a->u != b->u) return a->u < b->u;
        return a->v < b->v;
    });
    std::ostringstream os;
    os.precision(12);
    for (const auto* e : es) {
        os << e->u << " ";
        if (e->v == kBoundary) os << "B";
        else os << e->v;
        os << " " << e->weight << " " << e->prob << " " << (e->flips_observable ? 1 : 0) << "\n";
    }
    return os.str();
}

bool DetectorGraph::boundary_connected() const {
    // Every node must reach the boundary through the edge set.
    std::vector<std::vector<uint32_t>> adj(node_count);
    std::vector<uint8_t> reached(node_count, 0);
    std::vector<uint32_t> stack;
    for (const auto& e : edges) {
        if (e.v == kBoundary) {
            if (!reached[e.u]) {
                reached[e.u] = 1;
                stack.push_back(e.u);
            }
        } else {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
    }
    while (!stack.empty()) {
        uint32_t u = stack.back();
        stack.pop_back();
        for (uint32_t v : adj[u])
            if (!reached[v]) {
                reached[v] = 1;
                stack.push_back(v);
            }
    }
    for (uint32_t i = 0; i < node_count; i++)
        if (!reached[i]) return false;
    return true;
}

}  // namespace hexinject
