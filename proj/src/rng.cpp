#include "andersonlab/rng.hpp"

namespace andersonlab {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014); full-avalanche permutation.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t combine(uint64_t h, uint64_t v) { return mix64(h ^ mix64(v)); }

}  // namespace

uint64_t counter_hash(uint64_t seed, uint64_t realization, const Coord& site) {
    // Coordinates are signed; cast keeps distinct keys distinct.
    uint64_t packed = (static_cast<uint64_t>(static_cast<uint32_t>(site[0])) << 32) |
                      static_cast<uint64_t>(static_cast<uint32_t>(site[1]));
    uint64_t h = mix64(seed);
    h = combine(h, realization);
    h = combine(h, packed);
    return h;
}

double counter_uniform01(uint64_t seed, uint64_t realization, const Coord& site) {
    return static_cast<double>(counter_hash(seed, realization, site) >> 11) * 0x1.0p-53;
}

double uniform01(uint64_t seed, uint64_t stream, uint64_t slot) {
    uint64_t h = mix64(seed);
    h = combine(h, stream);
    h = combine(h, slot);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace andersonlab
