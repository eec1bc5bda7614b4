#pragma once

#include <cstdint>

namespace stopdur {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256++. One instance per (seed, stream) pair; simulations key the
// stream by replication index so a parallel run consumes exactly the same
// numbers as a serial one.
class rng_stream {
public:
    rng_stream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ull * (stream + 1));
        s_[0] = splitmix64(sm);
        s_[1] = splitmix64(sm);
        s_[2] = splitmix64(sm);
        s_[3] = splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
            s_[0] = 1; // all-zero state is a fixed point, nudge off it
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0,1), 53 bits
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1], safe under log()
    double next_double_pos() { return 1.0 - next_double(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace stopdur
