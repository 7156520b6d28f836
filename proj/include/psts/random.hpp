#ifndef PSTS_RANDOM_HPP
#define PSTS_RANDOM_HPP

// Portable random streams. Standard library distributions are
// implementation-defined, so every draw used by the simulator goes
// through the generators below and is identical on every platform.
//
// SplitMix64 (Steele, Lea, Flood 2014): the state advances by the golden
// gamma 0x9E3779B97F4A7C15 and each output is the state passed through
// the finalizer
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//     z =  z ^ (z >> 31)

#include <cstdint>

namespace psts {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();

    // Uniform on [0, bound); bound > 0. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound);

    // Uniform on [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    double exponential(double rate);

    // Knuth's product method below mean 30, Hoermann's PTRS above.
    std::int64_t poisson(double mean);

private:
    std::uint64_t state_;
};

// Stateless finalizer; derives independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    return mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

} // namespace psts

#endif
