#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hexinject/types.hpp"

namespace hexinject {

enum class Op : uint8_t {
    ResetZ,
    Hadamard,
    Cnot,   // a = control, b = target
    Cz,
    MeasureZ,     // writes record slot `slot`
    Noise1,       // channel index into Circuit::channels1
    Noise2,       // channel index into Circuit::channels2
    ReadoutFlip,  // flips record `slot` with probability `prob`
};

struct Instruction {
    Op op;
    QubitId a = 0;
    QubitId b = 0;
    int32_t slot = -1;    // MeasureZ / ReadoutFlip
    int32_t chan = -1;    // Noise1 / Noise2
    double prob = 0.0;    // ReadoutFlip
    bool operator==(const Instruction& o) const {
        return op == o.op && a == o.a && b == o.b && slot == o.slot && chan == o.chan &&
               prob == o.prob;
    }
};

enum class Stage : uint8_t { StageI, StageII };
enum class DetectorClass : uint8_t { StabilizerCompare, FlagCheck, FinalReadout };

struct Detector {
    std::vector<int32_t> slots;  // record slots whose parity is 0 noiselessly
    Stage stage = Stage::StageI;
    DetectorClass klass = DetectorClass::StabilizerCompare;
    int32_t round = 0;
};

struct SingleQubitChannel {
    double px = 0, py = 0, pz = 0;
    double total() const { return px + py + pz; }
};

struct TwoQubitChannel {
    // The 15 non-identity two-qubit Paulis, ordered IX, IY, IZ, XI, XX, XY,
    // XZ, YI, YX, YY, YZ, ZI, ZX, ZY, ZZ (first letter acts on operand a).
    double p[15] = {};
    double total() const {
        double t = 0;
        for (double v : p) t += v;
        return t;
    }
};

extern const char* const kTwoQubitPauliNames[15];

struct Circuit {
    uint32_t qubit_count = 0;
    std::vector<Instruction> instructions;
    std::vector<Detector> detectors;
    std::vector<int32_t> observable_slots;
    RunBasis observable_basis = RunBasis::ZRun;
    int32_t record_count = 0;
    std::vector<SingleQubitChannel> channels1;
    std::vector<TwoQubitChannel> channels2;
    bool noise_attached = false;

    size_t count_op(Op op) const;
    bool operator==(const Circuit& o) const;
};

std::string dump_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace hexinject
