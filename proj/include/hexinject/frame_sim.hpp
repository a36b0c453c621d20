#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hexinject/circuit.hpp"

namespace hexinject {

// Deterministic counter-based stream: every (seed, batch, instruction) tuple
// gets its own generator, so results are independent of execution order.
struct RngStream {
    uint64_t state;
    explicit RngStream(uint64_t s) : state(s) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b);

// One sampled batch of shots: detection events and observable flips,
// bit-packed shot-minor (bit k of word w = shot 64*w + k).
struct ShotBatch {
    uint64_t batch_index = 0;
    uint32_t shots = 0;  // shots actually present in this batch
    uint32_t words = 0;
    std::vector<std::vector<uint64_t>> detectors;  // [detector][word]
    std::vector<uint64_t> observable;              // [word]
};

struct SampleConfig {
    uint64_t shots = 0;
    uint64_t seed = 0;
    uint32_t batch_size = 64 * 1024;
};

// Streams batches of detection events to the callback, in batch order.
void sample(const Circuit& circuit, const SampleConfig& config,
            const std::function<void(const ShotBatch&)>& sink);

// Convenience wrapper collecting everything into one dense matrix.
ShotBatch sample_all(const Circuit& circuit, uint64_t shots, uint64_t seed);

// Little-endian packed detection-event dump (shots-major, detector-minor)
// plus a JSON sidecar describing dimensions and detector metadata.
void write_detection_events(const Circuit& circuit, uint64_t shots, uint64_t seed,
                            const std::string& path_bin, const std::string& path_json);

}  // namespace hexinject
