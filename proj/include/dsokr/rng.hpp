#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dsokr {

// SplitMix64 stream generator. Chosen over std::mt19937 +
// std::normal_distribution because the standard does not pin the
// distribution algorithms, and sketches must be byte-identical across
// platforms. The uniform mapping and the Box-Muller transform below are
// part of the serialization contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; one spare value cached
    double normal();

    // integer in [0, n)
    int below(int n);

    // m distinct indices in [0, n), partial Fisher-Yates, order preserved
    std::vector<int> sample_without_replacement(int n, int m);

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dsokr
