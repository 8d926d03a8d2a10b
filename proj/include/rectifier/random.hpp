#pragma once

#include <cstdint>
#include <random>

namespace rectifier {

/// The single pseudo-random generator used throughout the toolkit.
///
/// std::mt19937_64 has a fully specified output sequence, so identical seeds
/// give identical streams on every conforming implementation. The standard
/// distributions do not share that guarantee, hence the hand-written helpers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound); bound must be nonzero. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace rectifier
