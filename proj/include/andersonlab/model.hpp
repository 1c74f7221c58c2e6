#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "andersonlab/lattice.hpp"

namespace andersonlab {

// Finite real-valued stencil anchored at the origin: offset -> value.
struct Stencil {
    std::vector<std::pair<Coord, double>> entries;

    bool empty() const { return entries.empty(); }
    double value_at(const Coord& c) const;
    double min_value() const;
};

// Single-site coupling law: uniform on [lo, hi] with 0 <= lo <= hi <= 1.
// lo == hi gives the point mass.
struct SiteLaw {
    double lo = 0.0;
    double hi = 1.0;
};

struct ModelConfig {
    int dimension = 1;
    int sites_per_side = 100;
    double lattice_spacing = 1.0;
    double coupling = 1.0;                // disorder strength, >= 0
    double perturbation_strength = 0.0;   // default tau for perturbed operators
    std::vector<double> background;       // periodic table, period^d row-major values; empty = 0
    Stencil bump_profile;                 // single-site disorder profile u >= 0; empty = point stencil
    Stencil perturbation;                 // perturbation profile W (signed, compact)
    SiteLaw single_site_law;
    uint64_t seed = 0;

    double eig_tol = 1e-9;
    double kernel_tol = 1e-6;
    double det_tol = 1e-8;

    Box box() const { return Box::centered(dimension, sites_per_side); }
};

// Throws ConfigError on any contract violation; returns the covering
// constant min_x sum_k u(x-k) (recorded, must be > 0).
double validate(const ModelConfig& cfg);

struct DisorderRealization {
    uint64_t index = 0;
    std::vector<double> omega;  // one coupling per box site, by linear index
};

DisorderRealization sample_realization(const ModelConfig& cfg, uint64_t index);

struct Hamiltonian {
    Box box;
    double tau = 0.0;
    double spectral_floor = 0.0;  // E0 = min_x min(V0, V0 + W); lower bound for all tau in [0,1]
    Eigen::MatrixXd matrix;
};

// Dirichlet finite-difference operator -Laplace + V0 + lambda sum_k omega_k u(.-k)
// on the configured box; tau = 0.
Hamiltonian build_hamiltonian(const ModelConfig& cfg, const DisorderRealization& omega);

// H + tau * diag(W). Requires supp W inside H's box.
Hamiltonian apply_perturbation(const ModelConfig& cfg, const Hamiltonian& h, double tau);

// Principal submatrix on the sub-box sites (matrix Dirichlet restriction).
Hamiltonian restrict_dirichlet(const ModelConfig& cfg, const DisorderRealization& omega,
                               const Box& subbox);

// Same restriction applied to an assembled operator (used for perturbed ones).
Hamiltonian restrict_dirichlet(const Hamiltonian& h, const Box& subbox);

// Diagonal of the perturbation on a box (zero off supp W).
Eigen::VectorXd perturbation_diagonal(const ModelConfig& cfg, const Box& box);

}  // namespace andersonlab
