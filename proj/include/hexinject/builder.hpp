#pragma once

#include "hexinject/circuit.hpp"
#include "hexinject/regions.hpp"

namespace hexinject {

// Compiles the two-stage injection protocol: d1-patch initialization, two
// post-selected Stage I rounds, region III/IV initialization, d2 Stage II
// rounds, transversal readout in the initialization bases, and the logical
// observable of the requested run basis. The result carries no noise; use
// attach_noise afterwards.
Circuit build_injection_circuit(const CodeLayout& layout_d1, const CodeLayout& layout_d2,
                                const RegionAssignment& regions, RunBasis readout_basis);

// One full stabilizer-measurement round over the layout, without detectors
// or record bookkeeping. Exposed for inspection and tests.
std::vector<Instruction> schedule_round(const CodeLayout& layout);

struct BuilderTestHooks {
    // Drops the closing mirror CNOT of every flag chain; used by the
    // flag-symmetry mutation audit.
    bool break_flag_mirror = false;
};

Circuit build_injection_circuit_hooked(const CodeLayout& layout_d1, const CodeLayout& layout_d2,
                                       const RegionAssignment& regions, RunBasis readout_basis,
                                       const BuilderTestHooks& hooks);

}  // namespace hexinject
