#include "hexinject/noise.hpp"

#include <stdexcept>

namespace hexinject {

const char* const kTwoQubitPauliNames[15] = {"IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI",
                                             "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"};

namespace {
void check_args(double p, double eta, bool inf) {
    if (p < 0 || p > 1) throw std::invalid_argument("probability must be in [0,1]");
    if (!inf && eta < 0.5) throw std::invalid_argument("eta must be >= 0.5");
}
}  // namespace

SingleQubitChannel single_qubit_channel(double p, double eta, bool inf) {
    check_args(p, eta, inf);
    SingleQubitChannel c;
    if (inf) {
        c.pz = p;
        return c;
    }
    c.px = c.py = p / (2.0 * (eta + 1.0));
    c.pz = eta * p / (eta + 1.0);
    return c;
}

TwoQubitChannel two_qubit_channel(double p, double eta, bool inf) {
    check_args(p, eta, inf);
    TwoQubitChannel c;
    const int iz = 2, zi = 11, zz = 14;
    if (inf) {
        c.p[iz] = c.p[zi] = c.p[zz] = p / 3.0;
        return c;
    }
    double light = p / (6.0 * (eta + 2.0));
    double heavy = eta * p / (3.0 * (eta + 2.0));
    for (int i = 0; i < 15; i++) c.p[i] = light;
    c.p[iz] = c.p[zi] = c.p[zz] = heavy;
    return c;
}

Circuit attach_noise(const Circuit& circuit, const NoiseParams& params) {
    if (circuit.noise_attached)
        throw std::invalid_argument("noise already attached to this circuit");
    Circuit out = circuit;
    out.instructions.clear();
    out.noise_attached = true;
    out.channels1.push_back(single_qubit_channel(params.p1_value(), params.eta, params.eta_infinite));
    out.channels2.push_back(two_qubit_channel(params.p2, params.eta, params.eta_infinite));
    const double p_ro = params.p_readout_value();

    for (const auto& in : circuit.instructions) {
        out.instructions.push_back(in);
        switch (in.op) {
            case Op::Cnot:
            case Op::Cz: {
                Instruction n{Op::Noise2, in.a, in.b};
                n.chan = 0;
                out.instructions.push_back(n);
                break;
            }
            case Op::Hadamard:
            case Op::ResetZ: {
                Instruction n{Op::Noise1, in.a};
                n.chan = 0;
                out.instructions.push_back(n);
                break;
            }
            case Op::MeasureZ: {
                Instruction n{Op::ReadoutFlip, in.a};
                n.slot = in.slot;
                n.prob = p_ro;
                out.instructions.push_back(n);
                break;
            }
            default:
                throw std::invalid_argument("unexpected instruction in noiseless circuit");
        }
    }
    return out;
}

}  // namespace hexinject
