#pragma once

#include <cstdint>
#include <random>

namespace galign {

// Deterministic random stream with hierarchical substreams.
//
// The engine is std::mt19937_64, whose seeding and output sequence are fully
// specified by the standard, so identical seeds give identical streams on
// every platform. Substreams are derived by mixing the parent key with child
// indices through splitmix64; deriving a child does not advance the parent.
// Gaussian and integer sampling are implemented here (Box-Muller, rejection)
// instead of <random> distributions because the standard leaves those
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed), engine_(seed) {}

    // Child stream for index path (a), (a,b) or (a,b,c).
    Rng child(std::uint64_t a) const;
    Rng child(std::uint64_t a, std::uint64_t b) const;
    Rng child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;

    std::uint64_t key() const { return key_; }

    // Next raw 64-bit word.
    std::uint64_t next() { return engine_(); }

    // Uniform double in (0, 1].
    double uniform01();

    // Uniform integer in [0, n), unbiased. n must be positive.
    std::uint64_t below(std::uint64_t n);

    // Standard normal deviate.
    double normal();

    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace galign
