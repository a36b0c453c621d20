#include "hexinject/frame_sim.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hexinject {

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
    uint64_t h = seed ^ 0x243f6a8885a308d3ull;
    h ^= a + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
    h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xc4ceb9fe1a85ec53ull;
    return h ^ (h >> 33);
}

namespace {

// Visits each shot selected independently with probability p, via geometric
// jumps; cost is proportional to the number of selected shots.
template <typename Fn>
void for_each_hit(RngStream& rng, uint32_t shots, double p, Fn&& fn) {
    if (p <= 0) return;
    if (p >= 1) {
        for (uint32_t s = 0; s < shots; s++) fn(s, rng.uniform());
        return;
    }
    const double denom = std::log1p(-p);
    double pos = 0;
    while (true) {
        double u = rng.uniform();
        pos += std::floor(std::log(1.0 - u) / denom) + 1.0;
        if (pos > shots) break;
        fn((uint32_t)(pos - 1), rng.uniform());
    }
}

struct FramePlanes {
    uint32_t words;
    std::vector<uint64_t> x, z;  // [qubit * words + w]
    explicit FramePlanes(uint32_t qubits, uint32_t w) : words(w), x(qubits * w, 0), z(qubits * w, 0) {}
    uint64_t* xq(QubitId q) { return x.data() + (size_t)q * words; }
    uint64_t* zq(QubitId q) { return z.data() + (size_t)q * words; }
};

}  // namespace

void sample(const Circuit& circuit, const SampleConfig& config,
            const std::function<void(const ShotBatch&)>& sink) {
    if (!circuit.noise_attached)
        throw std::invalid_argument("sample requires a circuit with noise attached");
    const uint32_t batch_size = config.batch_size ? config.batch_size : 64 * 1024;
    uint64_t remaining = config.shots;
    uint64_t batch_index = 0;
    while (remaining > 0) {
        uint32_t shots = (uint32_t)std::min<uint64_t>(remaining, batch_size);
        uint32_t words = (shots + 63) / 64;

        FramePlanes f(circuit.qubit_count, words);
        std::vector<std::vector<uint64_t>> records(circuit.record_count,
                                                   std::vector<uint64_t>(words, 0));

        uint64_t instr_index = 0;
        for (const auto& in : circuit.instructions) {
            instr_index++;
            switch (in.op) {
                case Op::ResetZ: {
                    uint64_t *x = f.xq(in.a), *z = f.zq(in.a);
                    for (uint32_t w = 0; w < words; w++) x[w] = z[w] = 0;
                    break;
                }
                case Op::Hadamard: {
                    uint64_t *x = f.xq(in.a), *z = f.zq(in.a);
                    for (uint32_t w = 0; w < words; w++) std::swap(x[w], z[w]);
                    break;
                }
                case Op::Cnot: {
                    uint64_t *xc = f.xq(in.a), *zc = f.zq(in.a);
                    uint64_t *xt = f.xq(in.b), *zt = f.zq(in.b);
                    for (uint32_t w = 0; w < words; w++) {
                        xt[w] ^= xc[w];
                        zc[w] ^= zt[w];
                    }
                    break;
                }
                case Op::Cz: {
                    uint64_t *xa = f.xq(in.a), *za = f.zq(in.a);
                    uint64_t *xb = f.xq(in.b), *zb = f.zq(in.b);
                    for (uint32_t w = 0; w < words; w++) {
                        za[w] ^= xb[w];
                        zb[w] ^= xa[w];
                    }
                    break;
                }
                case Op::MeasureZ: {
                    uint64_t* x = f.xq(in.a);
                    uint64_t* z = f.zq(in.a);
                    std::memcpy(records[in.slot].data(), x, words * 8);
                    // A Z discrepancy acts trivially on the post-measurement
                    // eigenstate; an X discrepancy persists.
                    for (uint32_t w = 0; w < words; w++) z[w] = 0;
                    break;
                }
                case Op::ReadoutFlip: {
                    RngStream rng(mix_seed(config.seed, batch_index, instr_index));
                    auto& rec = records[in.slot];
                    for_each_hit(rng, shots, in.prob,
                                 [&](uint32_t s, double) { rec[s >> 6] ^= 1ull << (s & 63); });
                    break;
                }
                case Op::Noise1: {
                    const auto& ch = circuit.channels1[in.chan];
                    double total = ch.total();
                    if (total <= 0) break;
                    RngStream rng(mix_seed(config.seed, batch_index, instr_index));
                    uint64_t *x = f.xq(in.a), *z = f.zq(in.a);
                    for_each_hit(rng, shots, total, [&](uint32_t s, double u) {
                        double v = u * total;
                        uint64_t bit = 1ull << (s & 63);
                        uint32_t w = s >> 6;
                        if (v < ch.px) {
                            x[w] ^= bit;
                        } else if (v < ch.px + ch.py) {
                            x[w] ^= bit;
                            z[w] ^= bit;
                        } else {
                            z[w] ^= bit;
                        }
                    });
                    break;
                }
                case Op::Noise2: {
                    const auto& ch = circuit.channels2[in.chan];
                    double total = ch.total();
                    if (total <= 0) break;
                    RngStream rng(mix_seed(config.seed, batch_index, instr_index));
                    uint64_t *xa = f.xq(in.a), *za = f.zq(in.a);
                    uint64_t *xb = f.xq(in.b), *zb = f.zq(in.b);
                    for_each_hit(rng, shots, total, [&](uint32_t s, double u) {
                        double v = u * total;
                        int k = 0;
                        double acc = 0;
                        for (; k < 14; k++) {
                            acc += ch.p[k];
                            if (v < acc) break;
                        }
                        // Pauli index layout: k = 4*pa + pb - 1 over {I,X,Y,Z}.
                        int pa = (k + 1) / 4, pb = (k + 1) % 4;
                        uint64_t bit = 1ull << (s & 63);
                        uint32_t w = s >> 6;
                        if (pa == 1 || pa == 2) xa[w] ^= bit;
                        if (pa == 2 || pa == 3) za[w] ^= bit;
                        if (pb == 1 || pb == 2) xb[w] ^= bit;
                        if (pb == 2 || pb == 3) zb[w] ^= bit;
                    });
                    break;
                }
            }
        }

        ShotBatch batch;
        batch.batch_index = batch_index;
        batch.shots = shots;
        batch.words = words;
        batch.detectors.resize(circuit.detectors.size());
        for (size_t d = 0; d < circuit.detectors.size(); d++) {
            std::vector<uint64_t> plane(words, 0);
            for (int32_t s : circuit.detectors[d].slots)
                for (uint32_t w = 0; w < words; w++) plane[w] ^= records[s][w];
            batch.detectors[d] = std::move(plane);
        }
        batch.observable.assign(words, 0);
        for (int32_t s : circuit.observable_slots)
            for (uint32_t w = 0; w < words; w++) batch.observable[w] ^= records[s][w];
        if (shots & 63) {
            // Mask out the unused tail bits of the final word.
            uint64_t mask = (1ull << (shots & 63)) - 1;
            for (auto& plane : batch.detectors) plane[words - 1] &= mask;
            batch.observable[words - 1] &= mask;
        }
        sink(batch);
        remaining -= shots;
        batch_index++;
    }
}

ShotBatch sample_all(const Circuit& circuit, uint64_t shots, uint64_t seed) {
    SampleConfig cfg;
    cfg.shots = shots;
    cfg.seed = seed;
    cfg.batch_size = (uint32_t)std::min<uint64_t>(shots, 1ull << 20);
    ShotBatch out;
    bool first = true;
    sample(circuit, cfg, [&](const ShotBatch& b) {
        if (first) {
            out = b;
            first = false;
        } else {
            throw std::logic_error("sample_all used with more than one batch");
        }
    });
    return out;
}

void write_detection_events(const Circuit& circuit, uint64_t shots, uint64_t seed,
                            const std::string& path_bin, const std::string& path_json) {
    std::ofstream bin(path_bin, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + path_bin);
    size_t n_det = circuit.detectors.size();
    size_t bytes_per_shot = (n_det + 7) / 8;
    SampleConfig cfg;
    cfg.shots = shots;
    cfg.seed = seed;
    sample(circuit, cfg, [&](const ShotBatch& b) {
        std::vector<uint8_t> row(bytes_per_shot);
        for (uint32_t s = 0; s < b.shots; s++) {
            std::fill(row.begin(), row.end(), 0);
            for (size_t d = 0; d < n_det; d++)
                if ((b.detectors[d][s >> 6] >> (s & 63)) & 1) row[d >> 3] |= (uint8_t)(1 << (d & 7));
            bin.write((const char*)row.data(), (std::streamsize)row.size());
        }
    });
    std::ofstream js(path_json);
    js << "{\n  \"shots\": " << shots << ",\n  \"detectors\": " << n_det
       << ",\n  \"bytes_per_shot\": " << bytes_per_shot << ",\n  \"bit_order\": \"little-endian\","
       << "\n  \"detector_meta\": [";
    for (size_t d = 0; d < n_det; d++) {
        const auto& det = circuit.detectors[d];
        js << (d ? ", " : "") << "{\"stage\": \"" << (det.stage == Stage::StageI ? "I" : "II")
           << "\", \"round\": " << det.round << "}";
    }
    js << "]\n}\n";
}

}  // namespace hexinject
