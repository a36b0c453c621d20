#pragma once

#include <map>
#include <set>

#include "hexinject/circuit.hpp"

namespace hexinject {

struct FaultEffect {
    std::set<uint32_t> fired_detectors;
    bool observable_flip = false;
    bool operator==(const FaultEffect& o) const {
        return fired_detectors == o.fired_detectors && observable_flip == o.observable_flip;
    }
};

// Single Pauli errors are written as an (x, z) mask pair per touched qubit.
struct SparsePauli {
    // qubit -> (x bit, z bit)
    std::map<QubitId, std::pair<bool, bool>> paulis;
    void mult(QubitId q, bool x, bool z) {
        auto& p = paulis[q];
        p.first ^= x;
        p.second ^= z;
        if (!p.first && !p.second) paulis.erase(q);
    }
};

// Precomputed per-qubit instruction streams for fast sparse propagation.
class FaultPropagator {
  public:
    explicit FaultPropagator(const Circuit& circuit);

    // Inserts `pauli` immediately after instruction `location` and propagates
    // it noiselessly through the rest of the circuit.
    FaultEffect propagate(size_t location, const SparsePauli& pauli) const;

    // Effect of flipping the classical record written by the MeasureZ at
    // `location` (a readout error).
    FaultEffect record_flip(size_t location) const;

    const Circuit& circuit() const { return *circuit_; }

  private:
    const Circuit* circuit_;
    std::vector<std::vector<uint32_t>> touching_;     // qubit -> instruction indices
    std::vector<std::vector<uint32_t>> dets_of_slot_; // record slot -> detector indices
    std::vector<bool> obs_slot_;
};

// Data qubits (excluding the magic qubit) with an initialization-adjacent
// single Pauli fault that fires no detector yet flips the observable.
std::set<QubitId> find_blind_qubits(const Circuit& circuit, const std::set<QubitId>& data_qubits,
                                    QubitId magic_qubit);

struct FaultAuditResult {
    bool pass = false;
    // Harmful undetected faults, as (instruction index, qubit set) pairs.
    std::vector<std::pair<size_t, std::set<QubitId>>> escapes;
    std::set<QubitId> escape_qubits;  // union of non-magic qubits touched
};

// Enumerates one Pauli fault at every gate/reset location and every record
// flip; passes when each fault either fires a detector or leaves the
// observable unflipped, except for faults confined to the magic qubit and at
// most one other data qubit (the blind qubit).
FaultAuditResult single_fault_audit(const Circuit& circuit, QubitId magic_qubit);

// For every flag-to-data coupling in the circuit: an X fault on the data-side
// flag between its mirrored CNOTs must decompose into (that flag's own check
// firing) x (the leg Pauli appearing on exactly one data qubit). Roles come
// from the layout.
bool flag_symmetry_holds(const Circuit& circuit, const struct CodeLayout& layout);

}  // namespace hexinject
