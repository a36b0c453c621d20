#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hexinject/builder.hpp"
#include "hexinject/matching.hpp"
#include "hexinject/noise.hpp"

namespace hexinject {

struct InjectionConfig {
    CodeType code = CodeType::Surface;
    Structure structure = Structure::Lattice;
    int d1 = 3;
    int d2 = 3;
    InitMethod method = InitMethod::DownTriangle;
    NoiseParams noise;
    uint64_t shots_per_basis = 1000000;
    uint64_t seed = 1;
    bool run_z = true;
    bool run_x = true;
    int threads = 0;  // 0 = hardware concurrency
};

struct BasisResult {
    uint64_t total_shots = 0;
    uint64_t accepted_shots = 0;
    uint64_t logical_errors = 0;
    double rate() const { return accepted_shots ? (double)logical_errors / accepted_shots : 0.0; }
    double stderr_() const {
        if (!accepted_shots) return 0.0;
        double e = rate();
        return std::sqrt(e * (1 - e) / (double)accepted_shots);
    }
};

struct ExperimentResult {
    InjectionConfig config;
    BasisResult z_run;  // estimates E_X
    BasisResult x_run;  // estimates E_Z
    bool no_acceptance = false;
    double wall_seconds = 0;

    double ex() const { return z_run.rate(); }
    double ez() const { return x_run.rate(); }
    double ex_se() const { return z_run.stderr_(); }
    double ez_se() const { return x_run.stderr_(); }
    double e_total() const { return 1.0 - (1.0 - ex()) * (1.0 - ez()); }
    double acceptance_rate() const {
        uint64_t tot = z_run.total_shots + x_run.total_shots;
        uint64_t acc = z_run.accepted_shots + x_run.accepted_shots;
        return tot ? (double)acc / tot : 0.0;
    }
};

ExperimentResult run_experiment(const InjectionConfig& config);

// CSV columns, in exact order:
// code,structure,d1,d2,init,eta,p2,p1,p_readout,shots,accepted_z,accepted_x,
// ex,ex_se,ez,ez_se,etotal,seed
std::string csv_header();
std::string csv_row(const ExperimentResult& r);
std::string row_key(const InjectionConfig& c);
uint64_t derive_row_seed(uint64_t master_seed, const std::string& key);

struct SweepGrid {
    std::vector<CodeType> codes{CodeType::Surface, CodeType::XzzxType, CodeType::ZxxzType};
    std::vector<Structure> structures{Structure::Lattice, Structure::HeavyHexagon};
    std::vector<InitMethod> methods{InitMethod::RightTriangle, InitMethod::DownTriangle,
                                    InitMethod::RightSquare, InitMethod::DownSquare};
    std::vector<double> etas{0.5, 1, 5, 10, 100};
    std::vector<bool> eta_inf_flags{};  // parallel to etas when nonempty
    std::vector<double> p2s{0.0005, 0.001, 0.0025, 0.005, 0.01};
    std::vector<int> d2s{3, 5, 7, 9};
    int d1 = 3;
    uint64_t shots_per_basis = 1000000;
    uint64_t master_seed = 1;

    size_t row_count() const {
        return codes.size() * structures.size() * methods.size() * etas.size() * p2s.size() *
               d2s.size();
    }
    std::vector<InjectionConfig> expand() const;
};

// Runs every grid row not already present in `out_path` (resumable by row
// key) and appends results; rows are rewritten sorted on completion.
int run_sweep(const SweepGrid& grid, const std::string& out_path,
              const std::function<void(const ExperimentResult&)>& progress = nullptr);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Cross-module audit for one configuration (layout invariants, channel
// algebra, noiseless soundness, blind qubits, decoder oracle, ...).
std::vector<VerifyCheck> verify_config(const InjectionConfig& config);

}  // namespace hexinject
