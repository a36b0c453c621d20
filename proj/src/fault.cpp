#include "hexinject/fault.hpp"

#include <algorithm>

#include "hexinject/layout.hpp"

namespace hexinject {

FaultPropagator::FaultPropagator(const Circuit& circuit) : circuit_(&circuit) {
    touching_.resize(circuit.qubit_count);
    for (uint32_t i = 0; i < circuit.instructions.size(); i++) {
        const auto& in = circuit.instructions[i];
        switch (in.op) {
            case Op::ResetZ:
            case Op::Hadamard:
            case Op::MeasureZ:
                touching_[in.a].push_back(i);
                break;
            case Op::Cnot:
            case Op::Cz:
                touching_[in.a].push_back(i);
                touching_[in.b].push_back(i);
                break;
            default:
                break;  // noise locations do not transform frames
        }
    }
    dets_of_slot_.resize(circuit.record_count);
    for (uint32_t d = 0; d < circuit.detectors.size(); d++)
        for (int32_t s : circuit.detectors[d].slots) dets_of_slot_[s].push_back(d);
    obs_slot_.assign(circuit.record_count, false);
    for (int32_t s : circuit.observable_slots) obs_slot_[s] = true;
}

FaultEffect FaultPropagator::propagate(size_t location, const SparsePauli& pauli) const {
    FaultEffect eff;
    if (pauli.paulis.empty()) return eff;
    const auto& instrs = circuit_->instructions;

    // frame[q] = (x, z); absent means identity.
    std::map<QubitId, std::pair<bool, bool>> frame = pauli.paulis;
    std::set<std::pair<uint32_t, QubitId>> queue;
    auto enqueue = [&](QubitId q, size_t after) {
        const auto& v = touching_[q];
        auto it = std::upper_bound(v.begin(), v.end(), (uint32_t)after);
        if (it != v.end()) queue.insert({*it, q});
    };
    auto fx = [&](QubitId q) { return frame.count(q) ? frame[q].first : false; };
    auto fz = [&](QubitId q) { return frame.count(q) ? frame[q].second : false; };
    auto fset = [&](QubitId q, bool x, bool z) {
        if (x || z) frame[q] = {x, z};
        else frame.erase(q);
    };
    for (const auto& [q, p] : pauli.paulis) enqueue(q, location);

    std::vector<uint8_t> toggles(circuit_->record_count, 0);
    while (!queue.empty()) {
        uint32_t idx = queue.begin()->first;
        queue.erase(queue.begin());
        const Instruction& in = instrs[idx];
        queue.erase({idx, in.a});
        if (in.op == Op::Cnot || in.op == Op::Cz) queue.erase({idx, in.b});

        switch (in.op) {
            case Op::ResetZ:
                frame.erase(in.a);
                break;
            case Op::Hadamard:
                fset(in.a, fz(in.a), fx(in.a));
                break;
            case Op::MeasureZ:
                if (fx(in.a)) toggles[in.slot] ^= 1;
                fset(in.a, fx(in.a), false);
                break;
            case Op::Cnot: {
                bool xc = fx(in.a), zc = fz(in.a), xt = fx(in.b), zt = fz(in.b);
                fset(in.a, xc, zc ^ zt);
                fset(in.b, xt ^ xc, zt);
                break;
            }
            case Op::Cz: {
                bool xa = fx(in.a), za = fz(in.a), xb = fx(in.b), zb = fz(in.b);
                fset(in.a, xa, za ^ xb);
                fset(in.b, xb, zb ^ xa);
                break;
            }
            default:
                break;
        }
        if (frame.count(in.a)) enqueue(in.a, idx);
        if ((in.op == Op::Cnot || in.op == Op::Cz) && frame.count(in.b)) enqueue(in.b, idx);
    }

    for (int32_t s = 0; s < circuit_->record_count; s++) {
        if (!toggles[s]) continue;
        for (uint32_t d : dets_of_slot_[s]) {
            auto it = eff.fired_detectors.find(d);
            if (it == eff.fired_detectors.end()) eff.fired_detectors.insert(d);
            else eff.fired_detectors.erase(it);
        }
        if (obs_slot_[s]) eff.observable_flip = !eff.observable_flip;
    }
    return eff;
}

FaultEffect FaultPropagator::record_flip(size_t location) const {
    FaultEffect eff;
    const Instruction& in = circuit_->instructions[location];
    int32_t slot = in.slot;
    for (uint32_t d : dets_of_slot_[slot]) {
        auto it = eff.fired_detectors.find(d);
        if (it == eff.fired_detectors.end()) eff.fired_detectors.insert(d);
        else eff.fired_detectors.erase(it);
    }
    if (obs_slot_[slot]) eff.observable_flip = !eff.observable_flip;
    return eff;
}

std::set<QubitId> find_blind_qubits(const Circuit& circuit, const std::set<QubitId>& data_qubits,
                                    QubitId magic_qubit) {
    FaultPropagator prop(circuit);
    std::set<QubitId> blind;
    // Initialization-adjacent locations: the last instruction of each data
    // qubit's preparation, i.e. its first ResetZ (plus the following H when
    // present). A fault inserted there models an imperfect preparation.
    std::map<QubitId, size_t> init_loc;
    std::set<QubitId> seen;
    for (size_t i = 0; i < circuit.instructions.size(); i++) {
        const auto& in = circuit.instructions[i];
        if (in.op == Op::ResetZ && data_qubits.count(in.a) && !seen.count(in.a)) {
            seen.insert(in.a);
            size_t loc = i;
            if (i + 1 < circuit.instructions.size() &&
                circuit.instructions[i + 1].op == Op::Hadamard &&
                circuit.instructions[i + 1].a == in.a)
                loc = i + 1;
            init_loc[in.a] = loc;
        }
    }
    for (const auto& [q, loc] : init_loc) {
        if (q == magic_qubit) continue;
        for (int pauli = 0; pauli < 3; pauli++) {
            SparsePauli p;
            p.mult(q, pauli != 2, pauli != 0);  // 0=X, 1=Y, 2=Z
            FaultEffect eff = prop.propagate(loc, p);
            if (eff.fired_detectors.empty() && eff.observable_flip) {
                blind.insert(q);
                break;
            }
        }
    }
    return blind;
}

FaultAuditResult single_fault_audit(const Circuit& circuit, QubitId magic_qubit) {
    FaultPropagator prop(circuit);
    FaultAuditResult res;
    auto consider = [&](size_t loc, const SparsePauli& p, const std::set<QubitId>& support) {
        FaultEffect eff = prop.propagate(loc, p);
        if (eff.fired_detectors.empty() && eff.observable_flip)
            res.escapes.push_back({loc, support});
    };
    for (size_t i = 0; i < circuit.instructions.size(); i++) {
        const auto& in = circuit.instructions[i];
        switch (in.op) {
            case Op::ResetZ:
            case Op::Hadamard:
            case Op::MeasureZ:
                for (int k = 0; k < 3; k++) {
                    SparsePauli p;
                    p.mult(in.a, k != 2, k != 0);
                    consider(i, p, {in.a});
                }
                if (in.op == Op::MeasureZ) {
                    FaultEffect eff = prop.record_flip(i);
                    if (eff.fired_detectors.empty() && eff.observable_flip)
                        res.escapes.push_back({i, {in.a}});
                }
                break;
            case Op::Cnot:
            case Op::Cz:
                for (int k = 1; k < 16; k++) {
                    int pa = k / 4, pb = k % 4;
                    SparsePauli p;
                    std::set<QubitId> sup;
                    if (pa) {
                        p.mult(in.a, pa != 3, pa != 1);
                        sup.insert(in.a);
                    }
                    if (pb) {
                        p.mult(in.b, pb != 3, pb != 1);
                        sup.insert(in.b);
                    }
                    consider(i, p, sup);
                }
                break;
            default:
                break;
        }
    }
    for (const auto& [loc, sup] : res.escapes)
        for (QubitId q : sup)
            if (q != magic_qubit) res.escape_qubits.insert(q);
    res.pass = res.escape_qubits.size() <= 1;
    return res;
}

bool flag_symmetry_holds(const Circuit& circuit, const CodeLayout& layout) {
    FaultPropagator prop(circuit);
    auto xor_into = [](FaultEffect& a, const FaultEffect& b) {
        for (uint32_t d : b.fired_detectors) {
            auto it = a.fired_detectors.find(d);
            if (it == a.fired_detectors.end()) a.fired_detectors.insert(d);
            else a.fired_detectors.erase(it);
        }
        a.observable_flip = a.observable_flip != b.observable_flip;
    };
    for (size_t i = 1; i < circuit.instructions.size(); i++) {
        const auto& in = circuit.instructions[i];
        if (in.op != Op::Cnot && in.op != Op::Cz) continue;
        if (layout.qubits[in.a].role != QubitRole::Flag) continue;
        if (layout.qubits[in.b].role != QubitRole::Data) continue;
        // X on the data-side flag just before the coupling.
        SparsePauli flag_x;
        flag_x.mult(in.a, true, false);
        FaultEffect before = prop.propagate(i - 1, flag_x);
        FaultEffect after_flag = prop.propagate(i, flag_x);
        SparsePauli data_p;
        data_p.mult(in.b, in.op == Op::Cnot, in.op == Op::Cz);
        FaultEffect data_eff = prop.propagate(i, data_p);
        // before == after_flag (+) data_eff: one data qubit, nothing else.
        FaultEffect combined = after_flag;
        xor_into(combined, data_eff);
        if (!(combined == before)) return false;
        // The flag's own check must fire so post-selection sees the fault.
        if (after_flag.fired_detectors.empty()) return false;
        if (after_flag.observable_flip) return false;
    }
    return true;
}

}  // namespace hexinject
