#pragma once

#include <optional>
#include <vector>

#include "hexinject/types.hpp"

namespace hexinject {

struct QubitInfo {
    QubitId id = 0;
    Coord coord;
    QubitRole role = QubitRole::Data;
};

struct Leg {
    QubitId data = 0;
    Pauli pauli = Pauli::X;
    LegOrient orient = LegOrient::Vertical;
    // Flag chain from the syndrome side towards the data side; empty on the
    // lattice structure.
    std::vector<QubitId> route;
};

struct StabilizerSpec {
    QubitId syndrome = 0;
    std::vector<Leg> legs;
};

struct LogicalOperatorSpec {
    Pauli pauli = Pauli::X;
    std::vector<QubitId> support;
};

// Planar surface-code patch with data qubits on lattice edges. The primary
// data qubits form a distance x distance grid ("vertical" edges, coordinates
// at multiples of 4); the (d-1)^2 "horizontal" edge qubits sit between them.
// Stabilizers are vertex stars and face plaquettes, weight 3 on the boundary
// and 4 in the bulk. The XZZX/ZXXZ variants relabel leg Paulis by leg
// orientation; supports and placement are identical to the surface code.
struct CodeLayout {
    CodeType code_type = CodeType::Surface;
    Structure structure = Structure::Lattice;
    int distance = 3;
    std::vector<QubitInfo> qubits;
    std::vector<StabilizerSpec> stabilizers;
    LogicalOperatorSpec logical_x;
    LogicalOperatorSpec logical_z;
    QubitId magic_qubit = 0;

    size_t qubit_count() const { return qubits.size(); }
    size_t count_role(QubitRole r) const;
    // ZxxzType layouts iterate in column-major ("dual") order so that the
    // compiled protocol is the exact diagonal mirror of the XzzxType one.
    bool dual_axis() const { return code_type == CodeType::ZxxzType; }
};

struct BuildOptions {
    // Extra flags inserted in the middle of each vertical-leg chain, on top
    // of the default [stabilizer flag, data flag] pair.
    int extra_flags_per_leg = 0;
};

CodeLayout build_layout(CodeType code, Structure structure, int distance,
                        const BuildOptions& opts = {});

// Returns (logical_x, logical_z) of the layout.
std::pair<LogicalOperatorSpec, LogicalOperatorSpec> logical_supports(const CodeLayout& layout);

// Transposes every coordinate, swaps leg orientations, and maps
// XzzxType <-> ZxxzType (Surface maps to itself with star/plaquette roles
// exchanged). Qubits are re-indexed canonically, so applying this twice
// returns a layout isomorphic to the input.
CodeLayout diagonal_reflect(const CodeLayout& layout);

// Structure-preserving qubit bijection between two layouts (roles, leg
// Paulis and routes, logical supports, magic qubit). Returns std::nullopt
// when the layouts are not isomorphic.
std::optional<std::vector<QubitId>> find_layout_isomorphism(const CodeLayout& a,
                                                            const CodeLayout& b);

// `dump-layout` text format: one line per qubit `id role row col`, one line
// per stabilizer, one line per logical operator. Deterministic.
std::string dump_layout(const CodeLayout& layout);

// Maximum number of distinct qubits any qubit interacts with via two-qubit
// couplings implied by the stabilizer gadgets.
int max_interaction_degree(const CodeLayout& layout);

// True when every pair of stabilizers commutes and both logical operators
// commute with every stabilizer while anticommuting with each other once.
bool check_commutation(const CodeLayout& layout);

// GF(2) rank of the stabilizer set in symplectic form.
int stabilizer_rank(const CodeLayout& layout);

}  // namespace hexinject
