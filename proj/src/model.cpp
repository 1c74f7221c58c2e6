#include "andersonlab/model.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

#include "andersonlab/rng.hpp"

namespace andersonlab {

// ---- lattice geometry ------------------------------------------------------

Box Box::centered(int dimension, int sites_per_side) {
    Box b;
    b.dimension = dimension;
    for (int ax = 0; ax < 2; ++ax) {
        if (ax < dimension) {
            b.lo[ax] = -(sites_per_side / 2);
            b.extent[ax] = sites_per_side;
        } else {
            b.lo[ax] = 0;
            b.extent[ax] = 1;
        }
    }
    return b;
}

long Box::index(const Coord& c) const {
    long i = 0;
    for (int ax = 0; ax < dimension; ++ax) i = i * extent[ax] + (c[ax] - lo[ax]);
    return i;
}

Coord Box::coord(long i) const {
    Coord c = {0, 0};
    for (int ax = dimension - 1; ax >= 0; --ax) {
        c[ax] = lo[ax] + static_cast<int>(i % extent[ax]);
        i /= extent[ax];
    }
    return c;
}

SiteSet singleton(const Box& box, const Coord& c) {
    if (!box.contains(c))
        throw PreconditionError("site (" + std::to_string(c[0]) + "," + std::to_string(c[1]) +
                                ") outside the box");
    return {box.index(c)};
}

int sup_distance(const Coord& a, const Coord& b) {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

int set_distance(const Box& box, const SiteSet& a, const SiteSet& b) {
    if (a.empty() || b.empty()) throw PreconditionError("empty site set");
    int d = INT_MAX;
    for (long i : a)
        for (long j : b) d = std::min(d, sup_distance(box.coord(i), box.coord(j)));
    return d;
}

int boundary_distance(const Box& box, const SiteSet& s, const Box& sub) {
    if (s.empty()) throw PreconditionError("empty site set");
    int d = INT_MAX;
    for (long i : s) {
        Coord c = box.coord(i);
        for (int ax = 0; ax < box.dimension; ++ax) {
            d = std::min(d, c[ax] - sub.lo[ax] + 1);
            d = std::min(d, sub.lo[ax] + sub.extent[ax] - c[ax]);
        }
    }
    return d;
}

// ---- stencils and validation -----------------------------------------------

double Stencil::value_at(const Coord& c) const {
    double v = 0.0;
    for (const auto& [o, val] : entries)
        if (o == c) v += val;
    return v;
}

double Stencil::min_value() const {
    double v = 0.0;
    for (const auto& [o, val] : entries) v = std::min(v, val);
    return v;
}

namespace {

int background_period(const ModelConfig& cfg) {
    if (cfg.background.empty()) return 1;
    long n = static_cast<long>(cfg.background.size());
    if (cfg.dimension == 1) return static_cast<int>(n);
    int p = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (static_cast<long>(p) * p != n)
        throw ConfigError("background table must hold period^2 values in dimension 2");
    return p;
}

inline int positive_mod(int a, int p) {
    int m = a % p;
    return m < 0 ? m + p : m;
}

double background_at(const ModelConfig& cfg, int period, const Coord& c) {
    if (cfg.background.empty()) return 0.0;
    if (cfg.dimension == 1) return cfg.background[positive_mod(c[0], period)];
    return cfg.background[positive_mod(c[0], period) * period + positive_mod(c[1], period)];
}

Stencil effective_bump(const ModelConfig& cfg) {
    if (!cfg.bump_profile.empty()) return cfg.bump_profile;
    Stencil point;
    point.entries.push_back({Coord{0, 0}, 1.0});
    return point;
}

}  // namespace

double validate(const ModelConfig& cfg) {
    if (cfg.dimension != 1 && cfg.dimension != 2)
        throw ConfigError("dimension must be 1 or 2, got " + std::to_string(cfg.dimension));
    if (cfg.sites_per_side < 2)
        throw ConfigError("sites_per_side must be >= 2, got " + std::to_string(cfg.sites_per_side));
    if (!(cfg.lattice_spacing > 0.0)) throw ConfigError("lattice_spacing must be > 0");
    if (!(cfg.coupling >= 0.0)) throw ConfigError("coupling must be >= 0");
    if (!(cfg.perturbation_strength >= 0.0 && cfg.perturbation_strength <= 1.0))
        throw ConfigError("perturbation_strength must lie in [0, 1]");
    if (!(cfg.single_site_law.lo >= 0.0 && cfg.single_site_law.lo <= cfg.single_site_law.hi &&
          cfg.single_site_law.hi <= 1.0))
        throw ConfigError("single_site_law must satisfy 0 <= lo <= hi <= 1");
    if (!(cfg.eig_tol > 0.0) || !(cfg.kernel_tol > 0.0) || !(cfg.det_tol > 0.0))
        throw ConfigError("tolerances must be > 0");

    int p = background_period(cfg);
    if (!cfg.background.empty() && cfg.sites_per_side % p != 0)
        throw ConfigError("background period " + std::to_string(p) + " does not divide L = " +
                          std::to_string(cfg.sites_per_side));

    Box box = cfg.box();
    Stencil u = effective_bump(cfg);
    for (const auto& [o, val] : u.entries) {
        if (val < 0.0) throw ConfigError("bump_profile must be nonnegative");
        if (!box.contains(o)) throw ConfigError("bump_profile support exceeds the box");
    }
    for (const auto& [o, val] : cfg.perturbation.entries) {
        (void)val;
        if (!box.contains(o)) throw ConfigError("perturbation support exceeds the box");
    }

    // Covering constant of the bump translates over the box.
    double covering = INFINITY;
    long n = box.size();
    for (long i = 0; i < n; ++i) {
        Coord x = box.coord(i);
        double s = 0.0;
        for (const auto& [o, val] : u.entries) {
            Coord k = {x[0] - o[0], x[1] - o[1]};
            if (box.contains(k)) s += val;
        }
        covering = std::min(covering, s);
    }
    if (!(covering > 0.0))
        throw ConfigError("bump_profile translates do not cover the box (covering constant 0)");
    return covering;
}

// ---- sampling and assembly ---------------------------------------------------

DisorderRealization sample_realization(const ModelConfig& cfg, uint64_t index) {
    Box box = cfg.box();
    long n = box.size();
    DisorderRealization r;
    r.index = index;
    r.omega.resize(static_cast<size_t>(n));
    double lo = cfg.single_site_law.lo, hi = cfg.single_site_law.hi;
    for (long i = 0; i < n; ++i)
        r.omega[static_cast<size_t>(i)] =
            lo + (hi - lo) * counter_uniform01(cfg.seed, index, box.coord(i));
    return r;
}

Eigen::VectorXd perturbation_diagonal(const ModelConfig& cfg, const Box& box) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(box.size());
    for (const auto& [o, val] : cfg.perturbation.entries) {
        if (!box.contains(o)) throw PreconditionError("perturbation support exceeds the box");
        w[box.index(o)] += val;
    }
    return w;
}

Hamiltonian build_hamiltonian(const ModelConfig& cfg, const DisorderRealization& omega) {
    Box box = cfg.box();
    long n = box.size();
    if (static_cast<long>(omega.omega.size()) != n)
        throw PreconditionError("realization size does not match the box");

    double inv_h2 = 1.0 / (cfg.lattice_spacing * cfg.lattice_spacing);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    int period = background_period(cfg);
    Stencil u = effective_bump(cfg);

    for (long i = 0; i < n; ++i) {
        Coord x = box.coord(i);
        m(i, i) = 2.0 * cfg.dimension * inv_h2 + background_at(cfg, period, x);
        for (const auto& [o, val] : u.entries) {
            Coord k = {x[0] - o[0], x[1] - o[1]};
            if (box.contains(k))
                m(i, i) += cfg.coupling * val * omega.omega[static_cast<size_t>(box.index(k))];
        }
        for (int ax = 0; ax < cfg.dimension; ++ax) {
            Coord nb = x;
            nb[ax] += 1;
            if (box.contains(nb)) {
                long j = box.index(nb);
                m(i, j) = -inv_h2;
                m(j, i) = -inv_h2;
            }
        }
    }

    double floor = INFINITY;
    for (long i = 0; i < n; ++i) {
        Coord x = box.coord(i);
        double v0 = background_at(cfg, period, x);
        floor = std::min(floor, std::min(v0, v0 + cfg.perturbation.value_at(x)));
    }

    Hamiltonian h;
    h.box = box;
    h.tau = 0.0;
    h.spectral_floor = floor;
    h.matrix = std::move(m);
    return h;
}

Hamiltonian apply_perturbation(const ModelConfig& cfg, const Hamiltonian& h, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw PreconditionError("perturbation strength must lie in [0, 1]");
    if (h.tau != 0.0) throw PreconditionError("operator is already perturbed");
    Hamiltonian out = h;
    out.tau = tau;
    out.matrix.diagonal() += tau * perturbation_diagonal(cfg, h.box);
    return out;
}

Hamiltonian restrict_dirichlet(const Hamiltonian& h, const Box& subbox) {
    if (subbox.dimension != h.box.dimension)
        throw PreconditionError("sub-box dimension mismatch");
    long m = subbox.size();
    for (long i = 0; i < m; ++i)
        if (!h.box.contains(subbox.coord(i)))
            throw PreconditionError("sub-box is not contained in the box");

    Eigen::MatrixXd sub(m, m);
    for (long i = 0; i < m; ++i) {
        long gi = h.box.index(subbox.coord(i));
        for (long j = 0; j < m; ++j) sub(i, j) = h.matrix(gi, h.box.index(subbox.coord(j)));
    }
    Hamiltonian out;
    out.box = subbox;
    out.tau = h.tau;
    out.spectral_floor = h.spectral_floor;  // restriction only raises the floor
    out.matrix = std::move(sub);
    return out;
}

Hamiltonian restrict_dirichlet(const ModelConfig& cfg, const DisorderRealization& omega,
                               const Box& subbox) {
    return restrict_dirichlet(build_hamiltonian(cfg, omega), subbox);
}

}  // namespace andersonlab
