#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace skucast {

/// splitmix64 step; used to mix seed material into independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a, used to fold series identifiers into seed material.
inline std::uint64_t hash_id(std::string_view id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives one seed from (master seed, stream key, counter). Streams built
/// from distinct counters are independent of each other and of the order in
/// which they are drawn from, so parallel simulation reproduces the
/// sequential output exactly.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::uint64_t stream_key,
                                 std::uint64_t counter) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream_key;
    std::uint64_t b = splitmix64(s);
    s ^= counter;
    std::uint64_t c = splitmix64(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL * (c | 1ULL));
}

using RandomStream = std::mt19937_64;

inline RandomStream make_stream(std::uint64_t master_seed,
                                std::uint64_t stream_key,
                                std::uint64_t counter) {
    return RandomStream(derive_seed(master_seed, stream_key, counter));
}

} // namespace skucast
