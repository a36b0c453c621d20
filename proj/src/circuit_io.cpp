#include <sstream>
#include <stdexcept>

#include "hexinject/circuit.hpp"

namespace hexinject {

size_t Circuit::count_op(Op op) const {
    size_t n = 0;
    for (const auto& in : instructions)
        if (in.op == op) n++;
    return n;
}

bool Circuit::operator==(const Circuit& o) const {
    if (qubit_count != o.qubit_count || record_count != o.record_count ||
        observable_basis != o.observable_basis || noise_attached != o.noise_attached)
        return false;
    if (!(instructions == o.instructions) || observable_slots != o.observable_slots)
        return false;
    if (detectors.size() != o.detectors.size()) return false;
    for (size_t i = 0; i < detectors.size(); i++) {
        const Detector &a = detectors[i], &b = o.detectors[i];
        if (a.slots != b.slots || a.stage != b.stage || a.klass != b.klass || a.round != b.round)
            return false;
    }
    if (channels1.size() != o.channels1.size() || channels2.size() != o.channels2.size())
        return false;
    for (size_t i = 0; i < channels1.size(); i++) {
        if (channels1[i].px != o.channels1[i].px || channels1[i].py != o.channels1[i].py ||
            channels1[i].pz != o.channels1[i].pz)
            return false;
    }
    for (size_t i = 0; i < channels2.size(); i++)
        for (int k = 0; k < 15; k++)
            if (channels2[i].p[k] != o.channels2[i].p[k]) return false;
    return true;
}

namespace {
const char* stage_name(Stage s) { return s == Stage::StageI ? "I" : "II"; }
const char* class_name(DetectorClass k) {
    switch (k) {
        case DetectorClass::StabilizerCompare: return "stab";
        case DetectorClass::FlagCheck: return "flag";
        case DetectorClass::FinalReadout: return "final";
    }
    return "?";
}
}  // namespace

std::string dump_circuit(const Circuit& c) {
    std::ostringstream os;
    os.precision(17);
    if (c.qubit_count == 0 && c.instructions.empty() && c.detectors.empty()) return "";
    os << "QUBITS " << c.qubit_count << "\n";
    os << "BASIS " << (c.observable_basis == RunBasis::ZRun ? "z" : "x") << "\n";
    for (size_t i = 0; i < c.channels1.size(); i++) {
        const auto& ch = c.channels1[i];
        os << "CHAN1 " << i << " " << ch.px << " " << ch.py << " " << ch.pz << "\n";
    }
    for (size_t i = 0; i < c.channels2.size(); i++) {
        os << "CHAN2 " << i;
        for (int k = 0; k < 15; k++) os << " " << c.channels2[i].p[k];
        os << "\n";
    }
    for (const auto& in : c.instructions) {
        switch (in.op) {
            case Op::ResetZ: os << "RZ " << in.a; break;
            case Op::Hadamard: os << "H " << in.a; break;
            case Op::Cnot: os << "CNOT " << in.a << " " << in.b; break;
            case Op::Cz: os << "CZ " << in.a << " " << in.b; break;
            case Op::MeasureZ: os << "MZ " << in.a << " " << in.slot; break;
            case Op::Noise1: os << "N1 " << in.a << " " << in.chan; break;
            case Op::Noise2: os << "N2 " << in.a << " " << in.b << " " << in.chan; break;
            case Op::ReadoutFlip: os << "FLIP " << in.a << " " << in.slot << " " << in.prob; break;
        }
        os << "\n";
    }
    for (const auto& d : c.detectors) {
        os << "DET " << stage_name(d.stage) << " " << class_name(d.klass) << " " << d.round;
        for (int32_t s : d.slots) os << " " << s;
        os << "\n";
    }
    if (!c.observable_slots.empty()) {
        os << "OBS";
        for (int32_t s : c.observable_slots) os << " " << s;
        os << "\n";
    }
    return os.str();
}

Circuit parse_circuit(const std::string& text) {
    Circuit c;
    std::istringstream is(text);
    std::string line;
    int max_slot = -1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "QUBITS") {
            ls >> c.qubit_count;
        } else if (tok == "BASIS") {
            std::string b;
            ls >> b;
            c.observable_basis = b == "z" ? RunBasis::ZRun : RunBasis::XRun;
        } else if (tok == "CHAN1") {
            size_t idx;
            SingleQubitChannel ch;
            ls >> idx >> ch.px >> ch.py >> ch.pz;
            c.channels1.resize(std::max(c.channels1.size(), idx + 1));
            c.channels1[idx] = ch;
        } else if (tok == "CHAN2") {
            size_t idx;
            ls >> idx;
            TwoQubitChannel ch;
            for (int k = 0; k < 15; k++) ls >> ch.p[k];
            c.channels2.resize(std::max(c.channels2.size(), idx + 1));
            c.channels2[idx] = ch;
        } else if (tok == "RZ" || tok == "H") {
            Instruction in{tok == "RZ" ? Op::ResetZ : Op::Hadamard};
            ls >> in.a;
            c.instructions.push_back(in);
        } else if (tok == "CNOT" || tok == "CZ") {
            Instruction in{tok == "CNOT" ? Op::Cnot : Op::Cz};
            ls >> in.a >> in.b;
            c.instructions.push_back(in);
        } else if (tok == "MZ") {
            Instruction in{Op::MeasureZ};
            ls >> in.a >> in.slot;
            max_slot = std::max(max_slot, in.slot);
            c.instructions.push_back(in);
        } else if (tok == "N1") {
            Instruction in{Op::Noise1};
            ls >> in.a >> in.chan;
            c.noise_attached = true;
            c.instructions.push_back(in);
        } else if (tok == "N2") {
            Instruction in{Op::Noise2};
            ls >> in.a >> in.b >> in.chan;
            c.noise_attached = true;
            c.instructions.push_back(in);
        } else if (tok == "FLIP") {
            Instruction in{Op::ReadoutFlip};
            ls >> in.a >> in.slot >> in.prob;
            c.noise_attached = true;
            c.instructions.push_back(in);
        } else if (tok == "DET") {
            Detector d;
            std::string st, kl;
            ls >> st >> kl >> d.round;
            d.stage = st == "I" ? Stage::StageI : Stage::StageII;
            d.klass = kl == "stab"    ? DetectorClass::StabilizerCompare
                      : kl == "flag"  ? DetectorClass::FlagCheck
                                      : DetectorClass::FinalReadout;
            int32_t s;
            while (ls >> s) d.slots.push_back(s);
            c.detectors.push_back(std::move(d));
        } else if (tok == "OBS") {
            int32_t s;
            while (ls >> s) c.observable_slots.push_back(s);
        } else {
            throw std::invalid_argument("unknown circuit line: " + line);
        }
    }
    c.record_count = max_slot + 1;
    return c;
}

}  // namespace hexinject
