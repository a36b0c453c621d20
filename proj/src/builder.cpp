#include "hexinject/builder.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace hexinject {

namespace {

struct Emitter {
    Circuit c;
    BuilderTestHooks hooks;

    void reset(QubitId q) { c.instructions.push_back({Op::ResetZ, q}); }
    void h(QubitId q) { c.instructions.push_back({Op::Hadamard, q}); }
    void cnot(QubitId a, QubitId b) { c.instructions.push_back({Op::Cnot, a, b}); }
    void cz(QubitId a, QubitId b) { c.instructions.push_back({Op::Cz, a, b}); }
    int measure(QubitId q) {
        int slot = c.record_count++;
        Instruction in{Op::MeasureZ, q};
        in.slot = slot;
        c.instructions.push_back(in);
        return slot;
    }
    void couple(QubitId chain_end, const Leg& leg) {
        if (leg.pauli == Pauli::X) cnot(chain_end, leg.data);
        else cz(chain_end, leg.data);
    }

    // Full extraction gadget for one stabilizer. Returns the syndrome slot;
    // flag measurement slots are appended to `flag_slots`.
    int gadget(const StabilizerSpec& s, std::vector<int>* flag_slots) {
        reset(s.syndrome);
        h(s.syndrome);
        bool chained = false;
        QubitId f1 = 0;
        for (const auto& l : s.legs)
            if (!l.route.empty()) {
                chained = true;
                f1 = l.route.front();
            }
        if (chained) cnot(s.syndrome, f1);
        for (const auto& l : s.legs) {
            if (l.route.empty()) {
                couple(s.syndrome, l);
            } else {
                // GHZ chain out from the stabilizer flag, mirrored around the
                // data coupling so every flag returns to |0>.
                for (size_t i = 0; i + 1 < l.route.size(); i++) cnot(l.route[i], l.route[i + 1]);
                couple(l.route.back(), l);
                for (size_t i = l.route.size() - 1; i-- > 0;)
                    if (!hooks.break_flag_mirror) cnot(l.route[i], l.route[i + 1]);
            }
        }
        if (chained && !hooks.break_flag_mirror) cnot(s.syndrome, f1);
        h(s.syndrome);
        int slot = measure(s.syndrome);
        reset(s.syndrome);
        if (chained) {
            flag_slots->push_back(measure(f1));
            reset(f1);
            for (const auto& l : s.legs)
                for (size_t i = 1; i < l.route.size(); i++) {
                    flag_slots->push_back(measure(l.route[i]));
                    reset(l.route[i]);
                }
        }
        return slot;
    }
};

bool basis_matches_leg(Basis b, Pauli p) {
    if (b == Basis::MagicProxy) return false;
    return p == Pauli::X ? b == Basis::PlusState : b == Basis::ZeroState;
}

}  // namespace

std::vector<Instruction> schedule_round(const CodeLayout& layout) {
    Emitter e;
    std::vector<int> flags;
    for (const auto& s : layout.stabilizers) e.gadget(s, &flags);
    return e.c.instructions;
}

Circuit build_injection_circuit_hooked(const CodeLayout& l1, const CodeLayout& l2,
                                       const RegionAssignment& regions, RunBasis run,
                                       const BuilderTestHooks& hooks) {
    if (l1.code_type != l2.code_type || l1.structure != l2.structure)
        throw std::invalid_argument("stage layouts must share code type and structure");
    if (l1.distance != regions.d1 || l2.distance != regions.d2)
        throw std::invalid_argument("region assignment inconsistent with layouts");
    for (const auto& q : l2.qubits)
        if (q.role == QubitRole::Data && !regions.init_basis.count(q.id))
            throw std::invalid_argument("region assignment missing a data qubit");

    std::map<Coord, QubitId> id2;
    for (const auto& q : l2.qubits) id2[q.coord] = q.id;

    // Stage I stabilizers, translated into d2 qubit ids.
    std::vector<StabilizerSpec> stage1;
    for (const auto& s : l1.stabilizers) {
        StabilizerSpec t;
        auto it = id2.find(l1.qubits[s.syndrome].coord);
        if (it == id2.end()) throw std::invalid_argument("d1 patch does not embed in d2");
        t.syndrome = it->second;
        for (const auto& l : s.legs) {
            Leg nl = l;
            nl.data = id2.at(l1.qubits[l.data].coord);
            nl.route.clear();
            for (QubitId f : l.route) nl.route.push_back(id2.at(l1.qubits[f].coord));
            t.legs.push_back(std::move(nl));
        }
        stage1.push_back(std::move(t));
    }

    // d2 stabilizers that coincide with a Stage I stabilizer (same syndrome,
    // same data/Pauli legs) support a compare detector across the stages.
    std::map<QubitId, size_t> stage1_of_syndrome;
    for (size_t i = 0; i < stage1.size(); i++) stage1_of_syndrome[stage1[i].syndrome] = i;
    auto coincides = [&](const StabilizerSpec& s2, size_t* s1_index) {
        auto it = stage1_of_syndrome.find(s2.syndrome);
        if (it == stage1_of_syndrome.end()) return false;
        const StabilizerSpec& s1 = stage1[it->second];
        if (s1.legs.size() != s2.legs.size()) return false;
        std::set<std::pair<QubitId, int>> a, b;
        for (const auto& l : s1.legs) a.insert({l.data, (int)l.pauli});
        for (const auto& l : s2.legs) b.insert({l.data, (int)l.pauli});
        if (a != b) return false;
        *s1_index = it->second;
        return true;
    };

    Emitter e;
    e.hooks = hooks;
    e.c.qubit_count = (uint32_t)l2.qubit_count();
    e.c.observable_basis = run;

    auto init_data = [&](QubitId q) {
        Basis b = regions.init_basis.at(q);
        e.reset(q);
        if (b == Basis::PlusState || (b == Basis::MagicProxy && run == RunBasis::XRun)) e.h(q);
    };

    // Stage I data initialization: the d1 patch in canonical order.
    std::vector<QubitId> d1_data, d2_only_data, all_data;
    for (const auto& q : l2.qubits) {
        if (q.role != QubitRole::Data) continue;
        all_data.push_back(q.id);
        bool in_d1 = q.coord.row <= 4 * (regions.d1 - 1) && q.coord.col <= 4 * (regions.d1 - 1);
        (in_d1 ? d1_data : d2_only_data).push_back(q.id);
    }
    for (QubitId q : d1_data) init_data(q);

    auto deterministic = [&](const StabilizerSpec& s) {
        for (const auto& l : s.legs)
            if (!basis_matches_leg(regions.init_basis.at(l.data), l.pauli)) return false;
        return true;
    };

    auto emit_round = [&](const std::vector<StabilizerSpec>& stabs, Stage stage, int round,
                          std::vector<int>* syndrome_slots) {
        syndrome_slots->clear();
        for (const auto& s : stabs) {
            std::vector<int> flag_slots;
            int slot = e.gadget(s, &flag_slots);
            syndrome_slots->push_back(slot);
            for (int fs : flag_slots)
                e.c.detectors.push_back({{fs}, stage, DetectorClass::FlagCheck, round});
        }
    };

    // Stage I: two rounds. Round 1 carries absolute detectors on stabilizers
    // whose every leg was prepared in that leg's eigenbasis; round 2 compares
    // against round 1 on every stabilizer. All Stage I detectors are
    // post-selection gates.
    std::vector<int> s1_r1, s1_r2;
    emit_round(stage1, Stage::StageI, 1, &s1_r1);
    for (size_t i = 0; i < stage1.size(); i++)
        if (deterministic(stage1[i]))
            e.c.detectors.push_back({{s1_r1[i]}, Stage::StageI, DetectorClass::StabilizerCompare, 1});
    emit_round(stage1, Stage::StageI, 2, &s1_r2);
    for (size_t i = 0; i < stage1.size(); i++)
        e.c.detectors.push_back(
            {{s1_r2[i], s1_r1[i]}, Stage::StageI, DetectorClass::StabilizerCompare, 2});

    // Stage II: initialize the extension regions, then d2 measurement rounds.
    for (QubitId q : d2_only_data) init_data(q);

    std::vector<int> prev, cur;
    const int rounds2 = regions.d2;
    for (int round = 1; round <= rounds2; round++) {
        emit_round(l2.stabilizers, Stage::StageII, round, &cur);
        for (size_t i = 0; i < l2.stabilizers.size(); i++) {
            const StabilizerSpec& s = l2.stabilizers[i];
            if (round == 1) {
                size_t s1i = 0;
                if (coincides(s, &s1i)) {
                    e.c.detectors.push_back({{cur[i], s1_r2[s1i]},
                                             Stage::StageII,
                                             DetectorClass::StabilizerCompare,
                                             round});
                } else if (deterministic(s)) {
                    e.c.detectors.push_back(
                        {{cur[i]}, Stage::StageII, DetectorClass::StabilizerCompare, round});
                }
            } else {
                e.c.detectors.push_back(
                    {{cur[i], prev[i]}, Stage::StageII, DetectorClass::StabilizerCompare, round});
            }
        }
        prev = cur;
    }

    // Transversal readout in the initialization bases (the magic qubit in the
    // run basis), final stabilizer reconstruction, and the observable.
    std::map<QubitId, int> final_slot;
    std::map<QubitId, bool> read_x;
    for (QubitId q : all_data) {
        Basis b = regions.init_basis.at(q);
        bool x_basis = b == Basis::PlusState || (b == Basis::MagicProxy && run == RunBasis::XRun);
        if (x_basis) e.h(q);
        final_slot[q] = e.measure(q);
        read_x[q] = x_basis;
    }
    for (size_t i = 0; i < l2.stabilizers.size(); i++) {
        const StabilizerSpec& s = l2.stabilizers[i];
        bool reconstructable = true;
        for (const auto& l : s.legs)
            if (read_x[l.data] != (l.pauli == Pauli::X)) reconstructable = false;
        if (!reconstructable) continue;
        Detector det;
        for (const auto& l : s.legs) det.slots.push_back(final_slot[l.data]);
        det.slots.push_back(prev[i]);
        det.stage = Stage::StageII;
        det.klass = DetectorClass::FinalReadout;
        det.round = rounds2 + 1;
        e.c.detectors.push_back(std::move(det));
    }
    const LogicalOperatorSpec& tested = run == RunBasis::ZRun ? l2.logical_z : l2.logical_x;
    for (QubitId q : tested.support) e.c.observable_slots.push_back(final_slot[q]);

    return e.c;
}

Circuit build_injection_circuit(const CodeLayout& l1, const CodeLayout& l2,
                                const RegionAssignment& regions, RunBasis run) {
    return build_injection_circuit_hooked(l1, l2, regions, run, {});
}

}  // namespace hexinject
