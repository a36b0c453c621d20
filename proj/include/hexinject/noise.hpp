#pragma once

#include "hexinject/circuit.hpp"

namespace hexinject {

struct NoiseParams {
    double p2 = 0.0;
    double p1 = -1.0;         // default p2 / 20
    double p_readout = -1.0;  // default p2
    double eta = 0.5;
    bool eta_infinite = false;

    double p1_value() const { return p1 < 0 ? p2 / 20.0 : p1; }
    double p_readout_value() const { return p_readout < 0 ? p2 : p_readout; }
    bool all_zero() const { return p2 == 0 && p1_value() == 0 && p_readout_value() == 0; }
};

// Eq.-(4) style biased single-qubit channel: P_X = P_Y = p / (2(eta+1)),
// P_Z = eta p / (eta+1). Infinite bias sends everything to Z.
SingleQubitChannel single_qubit_channel(double p, double eta, bool eta_infinite = false);

// Eqs. (5)-(6): the twelve pairs without a pure-Z component get
// p / (6(eta+2)) each; ZZ, ZI and IZ get eta p / (3(eta+2)).
TwoQubitChannel two_qubit_channel(double p, double eta, bool eta_infinite = false);

// Inserts Noise2 after every CNOT/CZ, Noise1 after every Hadamard and reset,
// and a ReadoutFlip after every measurement. Rejects circuits that already
// carry noise.
Circuit attach_noise(const Circuit& circuit, const NoiseParams& params);

}  // namespace hexinject
