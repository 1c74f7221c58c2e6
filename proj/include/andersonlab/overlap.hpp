#pragma once

#include <array>
#include <string>

#include "andersonlab/shift.hpp"
#include "andersonlab/spectral.hpp"

namespace andersonlab {

// Modulus of a many-body ground-state scalar product. Kept in log space so
// that exponentially small overlaps survive; value = exp(log_value).
struct OverlapResult {
    double value = 1.0;      // in [0, 1] up to det_tol
    double log_value = 0.0;  // natural log, -inf when the determinant vanishes
    long n_particles = 0;
    std::string method;
    bool zero_flag = false;
    bool degenerate = false;  // spectral cluster at the Fermi level
};

// |det <phi_j, psi_k>| over the lowest n eigenvectors of each operator,
// accumulated in log space through a pivoted LU.
OverlapResult overlap_matrix_det(const SpectralData& a, const SpectralData& b, long n,
                                 double zero_threshold);

// The three determinant representations of the same overlap,
//   det(1-(P-Q)^2)^{1/4}, det(1-P(1-Q)P)^{1/2}, det(1-(1-P)Q(1-P))^{1/2},
// for equal-rank orthogonal projections P and Q.
std::array<OverlapResult, 3> overlap_fredholm(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q,
                                              double zero_threshold);

// Overlap at Fermi energy E: the lowest N = N_A(E) levels of each operator
// are filled; N = 0 gives the empty product 1.
OverlapResult ground_state_overlap(const SpectralData& a, const SpectralData& b, double E,
                                   double eig_tol, double zero_threshold);

// det(1 - T^2)^{1/4} from the shift-operator spectrum. zero_flag iff T^2 has
// an eigenvalue within kernel_tol of 1, the operator-kernel criterion rather
// than the underflow one.
OverlapResult infinite_volume_overlap_proxy(const ShiftOperator& t, double kernel_tol,
                                            double zero_threshold);

// Lower bound for log S^4: -||T||_2^2 / (1 - ||T||^2), finite when ||T|| < 1.
double overlap_log_lower_bound(const ShiftOperator& t);

}  // namespace andersonlab
