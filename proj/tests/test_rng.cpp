#include <cmath>
#include <set>

#include "andersonlab/model.hpp"
#include "andersonlab/rng.hpp"
#include "doctest.h"

using namespace andersonlab;

TEST_CASE("counter hash is a pure function of (seed, index, site)") {
    Coord site = {17, -3};
    uint64_t a = counter_hash(42, 7, site);
    uint64_t b = counter_hash(42, 7, site);
    CHECK(a == b);
    CHECK(counter_hash(42, 8, site) != a);
    CHECK(counter_hash(43, 7, site) != a);
    CHECK(counter_hash(42, 7, Coord{17, -2}) != a);
    CHECK(counter_hash(42, 7, Coord{-3, 17}) != a);
}

TEST_CASE("uniform01 lands in [0,1) and spreads over sites") {
    std::set<uint64_t> seen;
    for (int x = -50; x < 50; ++x) {
        double v = counter_uniform01(1, 0, Coord{x, 0});
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        seen.insert(counter_hash(1, 0, Coord{x, 0}));
    }
    CHECK(seen.size() == 100);  // no collisions on a small window
}

TEST_CASE("empirical mean of omega_0 matches the uniform law") {
    // 1e4 i.i.d. copies of a single site coupling across realizations;
    // CLT bound: |mean - 1/2| <= 4 sigma with sigma = (12 * 1e4)^{-1/2}.
    const int n = 10000;
    double acc = 0.0;
    for (int r = 0; r < n; ++r) acc += counter_uniform01(123, static_cast<uint64_t>(r), Coord{0, 0});
    double mean = acc / n;
    double sigma = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(mean - 0.5) <= 4.0 * sigma);
}

TEST_CASE("site law rescales and point mass is exact") {
    ModelConfig cfg;
    cfg.sites_per_side = 16;
    cfg.single_site_law = {0.25, 0.75};
    auto r = sample_realization(cfg, 3);
    for (double w : r.omega) {
        CHECK(w >= 0.25);
        CHECK(w <= 0.75);
    }
    cfg.single_site_law = {0.5, 0.5};
    auto point = sample_realization(cfg, 3);
    for (double w : point.omega) CHECK(w == 0.5);
}

TEST_CASE("realizations are schedule independent") {
    ModelConfig cfg;
    cfg.sites_per_side = 32;
    cfg.seed = 99;
    auto first = sample_realization(cfg, 11);
    auto again = sample_realization(cfg, 11);
    REQUIRE(first.omega.size() == again.omega.size());
    for (size_t i = 0; i < first.omega.size(); ++i) CHECK(first.omega[i] == again.omega[i]);

    // Nested centered boxes share the disorder on shared sites.
    ModelConfig big = cfg;
    big.sites_per_side = 64;
    auto wide = sample_realization(big, 11);
    Box small_box = cfg.box(), big_box = big.box();
    for (long i = 0; i < small_box.size(); ++i) {
        Coord c = small_box.coord(i);
        CHECK(first.omega[static_cast<size_t>(i)] ==
              wide.omega[static_cast<size_t>(big_box.index(c))]);
    }
}
