#pragma once

#include <array>
#include <complex>
#include <vector>

#include "andersonlab/spectral.hpp"

namespace andersonlab {

// Piecewise-cubic function of bounded variation with jumps at the
// breakpoints. Value convention at a jump point: limit from the left, so
// indicator(E) is exactly the closed-interval spectral projector symbol
// 1_{(-inf, E]}. Constant tails left_value / right_value extend beyond the
// breakpoint range; polynomial i lives on (breaks[i], breaks[i+1]] in the
// local coordinate t = x - breaks[i].
struct BVFunction {
    std::vector<double> breaks;                  // nonempty, strictly increasing
    std::vector<std::array<double, 4>> poly;     // size breaks.size() - 1
    double left_value = 0.0;
    double right_value = 0.0;

    double operator()(double x) const;
    double derivative(double x) const;           // one-sided inside pieces, 0 on tails
    double left_limit(size_t break_idx) const;
    double right_limit(size_t break_idx) const;
    double jump(size_t break_idx) const;         // right limit - left limit
    std::vector<double> jump_points(double tol = 0.0) const;
};

BVFunction indicator(double E);
BVFunction ramp(double E, double width);               // smooth step 1 -> 0 across [E-w/2, E+w/2]
BVFunction bump(double center, double half_width);     // smooth compact bump of height 1
BVFunction table_function(const std::vector<std::pair<double, double>>& points);

double total_variation(const BVFunction& f);
double l1_norm(const BVFunction& f);                   // requires compact support
bool compactly_supported(const BVFunction& f);

// Threshold separating genuine discontinuities from the roundoff mismatch of
// adjacent piece evaluations: 1e-10 (1 + TV).
double jump_roundoff_tol(const BVFunction& f);

// f * 1_{[cut, inf)}; requires cut below every breakpoint and right tail 0.
// Used with cut = spectral_floor - 1, where f(H) = h(H) holds exactly.
BVFunction truncate_below(const BVFunction& f, double cut);

// V f(Lambda) V^T. Sets *degenerate when an eigenvalue sits within eig_tol of
// a jump point of f.
Eigen::MatrixXd apply_function_spectral(const SpectralData& sd, const BVFunction& f,
                                        double eig_tol, bool* degenerate = nullptr);

// Spectral projector 1_{(-inf, E]}(H).
Eigen::MatrixXd fermi_projection(const SpectralData& sd, double E);

// Discretization of the resolvent representation of f(H): nodes (x, y > 0)
// with complex weights; the mirror node at -y carries the conjugate weight
// and is implicit. Smooth pieces of df are staircased into micro-jumps whose
// y-range is floored at a quarter of the local spacing; honest jumps keep the
// full range down to y_min.
struct HSQuadrature {
    struct Node {
        double x, y;
        std::complex<double> w;
    };
    std::vector<Node> nodes;
    double y_min = 0.0;
    double resolution = 0.0;
    double truncation = -INFINITY;
    std::vector<double> jumps;          // positions needing a spectral gap
    double total_abs_weight = 0.0;      // mirror nodes included
    double mass_bound = 0.0;            // cutoff-norm bound on the measure mass
};

// resolution = log-grid nodes per decade in y (default 48 at call sites).
HSQuadrature hs_measure(const BVFunction& f, double y_min, double resolution,
                        double truncation = -INFINITY);

// Default refinement policy used by callers: y_min = 1e-4 * (min distance of
// f's jumps to the spectrum), or 1e-4 * spectral diameter without jumps.
double default_y_min(const BVFunction& f, const SpectralData& sd);

// (1/2pi) sum of weights times resolvent blocks. Checks that every jump of f
// keeps at least gap_tol = 1e-6 * diameter distance from the spectrum and
// that the truncation point lies below it.
LocalBlock apply_function_hs(const Hamiltonian& h, const HSQuadrature& q, const SiteSet& a,
                             const SiteSet& b);

// Smooth ramp of the cutoff: 1 on [-1,1], 0 outside [-2,2], C-infinity.
double cutoff_ramp(double t);
double cutoff_ramp_derivative(double t);

}  // namespace andersonlab
