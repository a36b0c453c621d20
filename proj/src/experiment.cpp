#include "hexinject/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "hexinject/fault.hpp"
#include "hexinject/frame_sim.hpp"

namespace hexinject {

namespace {

struct CompiledRun {
    Circuit noisy;
    DetectorGraph graph;
    std::unique_ptr<MwpmDecoder> decoder;
    std::vector<uint32_t> stage1_dets;
};

CompiledRun compile_run(const InjectionConfig& cfg, RunBasis basis, int threads) {
    CodeLayout l1 = build_layout(cfg.code, cfg.structure, cfg.d1);
    CodeLayout l2 = cfg.d1 == cfg.d2 ? l1 : build_layout(cfg.code, cfg.structure, cfg.d2);
    RegionAssignment regions = assign_regions(l2, cfg.method, cfg.d1, cfg.d2);
    Circuit clean = build_injection_circuit(l1, l2, regions, basis);
    CompiledRun run;
    run.noisy = attach_noise(clean, cfg.noise);
    run.graph = build_graph(run.noisy);
    run.decoder = std::make_unique<MwpmDecoder>(run.graph, threads);
    for (uint32_t d = 0; d < run.noisy.detectors.size(); d++)
        if (run.noisy.detectors[d].stage == Stage::StageI) run.stage1_dets.push_back(d);
    return run;
}

BasisResult sample_and_decode(const CompiledRun& run, uint64_t shots, uint64_t seed,
                              int threads) {
    BasisResult res;
    res.total_shots = shots;
    if (shots == 0) return res;

    const uint32_t batch_size = 1 << 14;
    uint64_t n_batches = (shots + batch_size - 1) / batch_size;
    std::vector<uint64_t> acc(n_batches, 0), err(n_batches, 0);

    auto process_batch = [&](uint64_t batch_index) {
        uint64_t first = batch_index * batch_size;
        uint32_t batch_shots = (uint32_t)std::min<uint64_t>(batch_size, shots - first);
        SampleConfig sc;
        sc.shots = batch_shots;
        sc.seed = mix_seed(seed, 0xba7c4ull, batch_index);
        sc.batch_size = batch_size;
        sample(run.noisy, sc, [&](const ShotBatch& b) {
            // Stage I veto mask.
            std::vector<uint64_t> reject(b.words, 0);
            for (uint32_t d : run.stage1_dets)
                for (uint32_t w = 0; w < b.words; w++) reject[w] |= b.detectors[d][w];
            // Fired Stage II detectors per accepted shot.
            std::vector<std::vector<uint32_t>> fired(b.shots);
            for (uint32_t node = 0; node < run.graph.node_count; node++) {
                uint32_t det = run.graph.det_of_node[node];
                const auto& plane = b.detectors[det];
                for (uint32_t w = 0; w < b.words; w++) {
                    uint64_t bits = plane[w] & ~reject[w];
                    while (bits) {
                        uint32_t k = (uint32_t)__builtin_ctzll(bits);
                        bits &= bits - 1;
                        fired[w * 64 + k].push_back(node);
                    }
                }
            }
            for (uint32_t s = 0; s < b.shots; s++) {
                if ((reject[s >> 6] >> (s & 63)) & 1) continue;
                acc[batch_index]++;
                bool obs = (b.observable[s >> 6] >> (s & 63)) & 1;
                bool predicted = false;
                if (!fired[s].empty()) predicted = run.decoder->decode(fired[s]).predicted_flip;
                if (predicted != obs) err[batch_index]++;
            }
        });
    };

    if (threads <= 1 || n_batches == 1) {
        for (uint64_t i = 0; i < n_batches; i++) process_batch(i);
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; t++)
            pool.emplace_back([&] {
                for (;;) {
                    uint64_t i = next.fetch_add(1);
                    if (i >= n_batches) return;
                    process_batch(i);
                }
            });
        for (auto& th : pool) th.join();
    }
    for (uint64_t i = 0; i < n_batches; i++) {
        res.accepted_shots += acc[i];
        res.logical_errors += err[i];
    }
    return res;
}

}  // namespace

ExperimentResult run_experiment(const InjectionConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    int threads = config.threads > 0 ? config.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
    ExperimentResult res;
    res.config = config;
    if (config.run_z) {
        CompiledRun run = compile_run(config, RunBasis::ZRun, threads);
        res.z_run = sample_and_decode(run, config.shots_per_basis,
                                      mix_seed(config.seed, 'Z', 0), threads);
    }
    if (config.run_x) {
        CompiledRun run = compile_run(config, RunBasis::XRun, threads);
        res.x_run = sample_and_decode(run, config.shots_per_basis,
                                      mix_seed(config.seed, 'X', 0), threads);
    }
    res.no_acceptance = (config.run_z && res.z_run.accepted_shots == 0) ||
                        (config.run_x && res.x_run.accepted_shots == 0);
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string csv_header() {
    return "code,structure,d1,d2,init,eta,p2,p1,p_readout,shots,accepted_z,accepted_x,"
           "ex,ex_se,ez,ez_se,etotal,seed";
}

namespace {
std::string fmt_eta(const NoiseParams& n) {
    if (n.eta_infinite) return "inf";
    std::ostringstream os;
    os << n.eta;
    return os.str();
}
}  // namespace

std::string csv_row(const ExperimentResult& r) {
    const InjectionConfig& c = r.config;
    std::ostringstream os;
    os.precision(12);
    os << to_string(c.code) << "," << to_string(c.structure) << "," << c.d1 << "," << c.d2 << ","
       << to_string(c.method) << "," << fmt_eta(c.noise) << "," << c.noise.p2 << ","
       << c.noise.p1_value() << "," << c.noise.p_readout_value() << "," << c.shots_per_basis
       << "," << r.z_run.accepted_shots << "," << r.x_run.accepted_shots << "," << r.ex() << ","
       << r.ex_se() << "," << r.ez() << "," << r.ez_se() << "," << r.e_total() << "," << c.seed;
    return os.str();
}

std::string row_key(const InjectionConfig& c) {
    std::ostringstream os;
    os.precision(12);
    os << to_string(c.code) << "|" << to_string(c.structure) << "|" << c.d1 << "|" << c.d2 << "|"
       << to_string(c.method) << "|" << fmt_eta(c.noise) << "|" << c.noise.p2 << "|"
       << c.noise.p1_value() << "|" << c.noise.p_readout_value() << "|" << c.shots_per_basis;
    return os.str();
}

uint64_t derive_row_seed(uint64_t master_seed, const std::string& key) {
    uint64_t h = master_seed ^ 0x51ee7ull;
    for (char ch : key) h = mix_seed(h, (uint64_t)(uint8_t)ch, 0x5eedull);
    return h;
}

std::vector<InjectionConfig> SweepGrid::expand() const {
    std::vector<InjectionConfig> rows;
    for (CodeType code : codes)
        for (Structure st : structures)
            for (InitMethod m : methods)
                for (size_t ei = 0; ei < etas.size(); ei++)
                    for (double p2 : p2s)
                        for (int d2 : d2s) {
                            InjectionConfig c;
                            c.code = code;
                            c.structure = st;
                            c.method = m;
                            c.d1 = d1;
                            c.d2 = d2;
                            c.noise.p2 = p2;
                            c.noise.eta = etas[ei];
                            c.noise.eta_infinite =
                                ei < eta_inf_flags.size() ? (bool)eta_inf_flags[ei] : false;
                            c.shots_per_basis = shots_per_basis;
                            c.seed = derive_row_seed(master_seed, row_key(c));
                            rows.push_back(c);
                        }
    return rows;
}

int run_sweep(const SweepGrid& grid, const std::string& out_path,
              const std::function<void(const ExperimentResult&)>& progress) {
    std::map<std::string, std::string> done;  // key -> csv line
    {
        std::ifstream in(out_path);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (first) {
                first = false;
                if (line == csv_header()) continue;
            }
            if (line.empty()) continue;
            // Reconstruct the key from the first 10 csv fields.
            std::istringstream ls(line);
            std::string f, key;
            for (int i = 0; i < 10 && std::getline(ls, f, ','); i++) key += (i ? "|" : "") + f;
            done[key] = line;
        }
    }
    int failures = 0;
    std::vector<InjectionConfig> rows = grid.expand();
    for (const auto& cfg : rows) {
        std::string key = row_key(cfg);
        if (done.count(key)) continue;
        try {
            ExperimentResult r = run_experiment(cfg);
            done[key] = csv_row(r);
            if (progress) progress(r);
        } catch (const std::exception& e) {
            failures++;
            continue;  // partial failure isolates to rows
        }
        // Rewrite sorted so the final file is order independent.
        std::ofstream out(out_path, std::ios::trunc);
        out << csv_header() << "\n";
        for (const auto& [k, line] : done) out << line << "\n";
    }
    std::ofstream out(out_path, std::ios::trunc);
    out << csv_header() << "\n";
    for (const auto& [k, line] : done) out << line << "\n";
    return failures;
}

namespace {

void add_check(std::vector<VerifyCheck>& out, const std::string& name, bool pass,
               const std::string& detail = "") {
    out.push_back({name, pass, detail});
}

}  // namespace

std::vector<VerifyCheck> verify_config(const InjectionConfig& cfg) {
    std::vector<VerifyCheck> out;

    // Channel algebra.
    {
        bool pass = true;
        std::ostringstream detail;
        for (double eta : {0.5, 1.0, 5.0, 10.0, 100.0, 1e6}) {
            for (double p : {0.001, 0.005, 0.01}) {
                auto c1 = single_qubit_channel(p, eta);
                auto c2 = two_qubit_channel(p, eta);
                if (std::abs(c1.total() - p) > 1e-12 || std::abs(c2.total() - p) > 1e-12)
                    pass = false;
            }
        }
        auto inf1 = single_qubit_channel(0.01, 0, true);
        if (inf1.px != 0 || inf1.py != 0 || inf1.pz != 0.01) pass = false;
        add_check(out, "channel-normalization", pass);
    }

    CodeLayout l1 = build_layout(cfg.code, cfg.structure, cfg.d1);
    CodeLayout l2 = cfg.d1 == cfg.d2 ? l1 : build_layout(cfg.code, cfg.structure, cfg.d2);
    add_check(out, "stabilizer-commutation", check_commutation(l2));
    add_check(out, "stabilizer-rank",
              stabilizer_rank(l2) == (int)l2.stabilizers.size(),
              "rank " + std::to_string(stabilizer_rank(l2)));
    {
        int deg = max_interaction_degree(l2);
        bool pass = cfg.structure == Structure::HeavyHexagon ? deg <= 3 : deg <= 4;
        add_check(out, "interaction-degree", pass, "max degree " + std::to_string(deg));
    }
    if (cfg.structure == Structure::HeavyHexagon) {
        bool pass = true;
        for (const auto& s : l2.stabilizers)
            for (const auto& l : s.legs) {
                if (l.orient == LegOrient::Vertical && l.route.empty()) pass = false;
                if (l.orient == LegOrient::Horizontal && !l.route.empty()) pass = false;
            }
        add_check(out, "flag-route-asymmetry", pass);
    }

    RegionAssignment regions = assign_regions(l2, cfg.method, cfg.d1, cfg.d2);
    std::set<QubitId> data;
    for (const auto& q : l2.qubits)
        if (q.role == QubitRole::Data) data.insert(q.id);

    // Noiseless soundness on both bases.
    for (RunBasis basis : {RunBasis::ZRun, RunBasis::XRun}) {
        Circuit clean = build_injection_circuit(l1, l2, regions, basis);
        NoiseParams zero;
        Circuit noisy = attach_noise(clean, zero);
        ShotBatch b = sample_all(noisy, 256, 7);
        bool pass = true;
        for (const auto& plane : b.detectors)
            for (uint64_t wd : plane)
                if (wd) pass = false;
        for (uint64_t wd : b.observable)
            if (wd) pass = false;
        add_check(out,
                  basis == RunBasis::ZRun ? "noiseless-soundness-z" : "noiseless-soundness-x",
                  pass);
    }

    // Blind qubit audit: union over the two run bases.
    {
        std::set<QubitId> blind;
        bool audits_pass = true;
        for (RunBasis basis : {RunBasis::ZRun, RunBasis::XRun}) {
            Circuit clean = build_injection_circuit(l1, l2, regions, basis);
            auto found = find_blind_qubits(clean, data, l2.magic_qubit);
            blind.insert(found.begin(), found.end());
            auto audit = single_fault_audit(clean, l2.magic_qubit);
            if (!audit.pass) audits_pass = false;
        }
        std::ostringstream detail;
        for (QubitId q : blind) detail << q << " ";
        add_check(out, "blind-qubit-count", blind.size() == 1, "blind: " + detail.str());
        add_check(out, "single-fault-coverage", audits_pass);
    }

    // Flag symmetry: a between-mirror X fault on a data-side flag reaches at
    // most one data qubit, and the flag's own detector fires.
    if (cfg.structure == Structure::HeavyHexagon) {
        Circuit clean = build_injection_circuit(l1, l2, regions, RunBasis::ZRun);
        bool pass = flag_symmetry_holds(clean, l2);
        add_check(out, "flag-symmetry", pass);
    }

    // Decoder oracle agreement on random syndromes.
    {
        Circuit clean = build_injection_circuit(l1, l2, regions, RunBasis::ZRun);
        Circuit noisy = attach_noise(clean, cfg.noise.p2 > 0 ? cfg.noise : NoiseParams{0.005});
        DetectorGraph g = build_graph(noisy);
        MwpmDecoder dec(g);
        RngStream rng(12345);
        bool pass = g.node_count > 0 && g.boundary_connected();
        for (int trial = 0; trial < 50 && pass; trial++) {
            std::set<uint32_t> fired_set;
            int k = 2 + (int)(rng.next() % 7);
            while ((int)fired_set.size() < k)
                fired_set.insert((uint32_t)(rng.next() % g.node_count));
            std::vector<uint32_t> fired(fired_set.begin(), fired_set.end());
            Correction a = dec.decode(fired);
            Correction b = dec.brute_force_decode(fired);
            if (a.total_weight_scaled != b.total_weight_scaled) pass = false;
        }
        add_check(out, "decoder-oracle", pass);
        double frac = g.total_mass > 0 ? g.dropped_mass / g.total_mass : 0;
        add_check(out, "dropped-mechanism-mass", frac < 0.01,
                  "fraction " + std::to_string(frac));
    }
    return out;
}

}  // namespace hexinject
