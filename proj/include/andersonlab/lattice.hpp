#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "andersonlab/errors.hpp"

namespace andersonlab {

// Lattice coordinates are absolute integers; a box of side L is centered at
// the origin (lo = -floor(L/2)), so boxes of increasing L are nested and a
// site keeps its coordinate (and its disorder value) across volumes.
using Coord = std::array<int, 2>;

struct Box {
    int dimension = 1;
    Coord lo = {0, 0};
    Coord extent = {0, 1};  // extent[axis] = 1 for axes >= dimension

    static Box centered(int dimension, int sites_per_side);

    long size() const {
        long n = 1;
        for (int ax = 0; ax < dimension; ++ax) n *= extent[ax];
        return n;
    }
    bool contains(const Coord& c) const {
        for (int ax = 0; ax < dimension; ++ax)
            if (c[ax] < lo[ax] || c[ax] >= lo[ax] + extent[ax]) return false;
        return true;
    }
    // Row-major linear index of an absolute coordinate.
    long index(const Coord& c) const;
    Coord coord(long i) const;
    bool operator==(const Box& o) const {
        return dimension == o.dimension && lo == o.lo && extent == o.extent;
    }
};

// A site set is a sorted list of linear indices into a fixed box.
using SiteSet = std::vector<long>;

SiteSet singleton(const Box& box, const Coord& c);

// Sup-norm distance between coordinates, and min pairwise distance between
// site sets (equals |a-b| for singletons).
int sup_distance(const Coord& a, const Coord& b);
int set_distance(const Box& box, const SiteSet& a, const SiteSet& b);

// Distance from a set to the complement of a sub-box (its Dirichlet boundary).
int boundary_distance(const Box& box, const SiteSet& s, const Box& sub);

}  // namespace andersonlab
