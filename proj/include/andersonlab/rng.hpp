#pragma once

#include <cstdint>

#include "andersonlab/lattice.hpp"

namespace andersonlab {

// Counter-based generator: every variate is a pure function of
// (seed, realization index, site coordinate), so sampling order and thread
// schedule cannot change a realization. Mixing is three rounds of the
// splitmix64 finalizer over the packed key.
uint64_t counter_hash(uint64_t seed, uint64_t realization, const Coord& site);

// Uniform double in [0, 1) built from the top 53 bits.
double counter_uniform01(uint64_t seed, uint64_t realization, const Coord& site);

// Generic scalar stream for non-site-indexed draws (tests, instance
// generators); `slot` plays the role of the site key.
double uniform01(uint64_t seed, uint64_t stream, uint64_t slot);

}  // namespace andersonlab
