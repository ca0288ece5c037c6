#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace sll {

/// Identifies one RNG stream: (master, stream) determines every drawn bit.
struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    /// Derived stream for a sub-task (individual index, repeat index, ...).
    RngSeed derive(std::uint64_t index) const;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small splittable generator: the state is a hash of (master, stream),
/// advanced by splitmix64 steps. Streams derived from distinct indices are
/// independent regardless of evaluation order, so parallel and serial
/// population generation are bitwise identical.
class Rng {
public:
    explicit Rng(RngSeed seed) {
        std::uint64_t s = seed.master;
        (void)splitmix64(s);
        s ^= 0x6a09e667f3bcc909ULL + seed.stream * 0x3c6ef372fe94f82bULL;
        (void)splitmix64(s);
        state_ = s;
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    /// Uniform in [0, bound), bound >= 1. Rejection-free Lemire reduction.
    std::uint32_t next_below(std::uint32_t bound) {
        while (true) {
            const std::uint64_t x = next_u64() >> 32;
            const std::uint64_t m = x * bound;
            const std::uint32_t lo = static_cast<std::uint32_t>(m);
            if (lo >= bound || lo >= (-bound) % bound)
                return static_cast<std::uint32_t>(m >> 32);
        }
    }

    double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Fisher-Yates permutation of {0..n-1}.
    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(next_below(static_cast<std::uint32_t>(i + 1)));
            std::swap(p[i], p[j]);
        }
        return p;
    }

private:
    std::uint64_t state_ = 0;
};

inline RngSeed RngSeed::derive(std::uint64_t index) const {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t h = splitmix64(s);
    return RngSeed{h, index};
}

}  // namespace sll
