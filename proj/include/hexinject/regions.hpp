#pragma once

#include <map>

#include "hexinject/layout.hpp"

namespace hexinject {

enum class Region : uint8_t { I, II, III, IV, MagicQubit };

std::string to_string(Region r);

struct RegionAssignment {
    InitMethod method = InitMethod::DownTriangle;
    int d1 = 3, d2 = 3;
    std::map<QubitId, Region> region;
    // Physical preparation basis per data qubit. On the XZZX variants the
    // secondary (horizontal-edge) data qubits carry the code's local frame,
    // so a region can mix |0> and |+> preparations across its sublattices.
    std::map<QubitId, Basis> init_basis;

    size_t count_region(Region r) const {
        size_t n = 0;
        for (const auto& [q, reg] : region)
            if (reg == r) n++;
        return n;
    }
};

// Splits the data qubits of `layout` (built at distance d2) into the magic
// qubit, regions I/II inside the d1 patch, and III/IV outside it.
RegionAssignment assign_regions(const CodeLayout& layout, InitMethod method, int d1, int d2);

}  // namespace hexinject
