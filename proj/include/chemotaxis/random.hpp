#pragma once

#include <cstdint>
#include <random>

namespace chemotaxis {

// Independent streams derived from one run seed, so spawning, exploration,
// weight initialization and minibatch sampling can be varied separately.
enum class Stream : std::uint64_t {
    Spawn = 1,
    Exploration = 2,
    Init = 3,
    Sampling = 4,
};

/// mt19937_64 with platform-independent uniform draws (the std
/// distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace chemotaxis
