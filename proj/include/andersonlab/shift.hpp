#pragma once

#include <Eigen/Dense>
#include <utility>

#include "andersonlab/funcalc.hpp"
#include "andersonlab/spectral.hpp"

namespace andersonlab {

// T(E) = 1_{(-inf,E]}(A) - 1_{(-inf,E]}(B). A difference of orthogonal
// projections: symmetric, spectrum in [-1, 1], singular values = |eigenvalues|.
struct ShiftOperator {
    double energy = 0.0;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd eigenvalues;      // ascending
    Eigen::VectorXd singular_values;  // descending
    bool degenerate = false;          // E within eig_tol of spec(A) or spec(B)
};

ShiftOperator shift_operator(const SpectralData& a, const SpectralData& b, double E,
                             double eig_tol);

// xi(E) = N_A(E) - N_B(E). Integer-valued and equal to Tr T(E) up to roundoff.
long ssf_counting(const SpectralData& a, const SpectralData& b, double E, double eig_tol,
                  bool* degenerate = nullptr);

// Midpoint-quadrature residual of the trace identity
//   Tr(f(A) - f(B)) + integral f'(l) xi(l) dl = 0
// over [lo, hi]. f must be jump-free with its derivative supported in [lo, hi].
double krein_residual(const SpectralData& a, const SpectralData& b, const BVFunction& f,
                      double lo, double hi, long panels, double eig_tol);

// Midpoint-quadrature residual of the coupling-constant identity
//   integral_I xi(E, H, H+W) dE = integral_0^1 Tr(W 1_I(H + sW)) ds
// with e_panels panels on I = [interval_lo, interval_hi] and s_panels on [0, 1].
double birman_solomyak_residual(const Eigen::MatrixXd& h, const Eigen::MatrixXd& w,
                                double interval_lo, double interval_hi, long e_panels,
                                long s_panels);

// Kernel dimensions of T -+ 1 resolved at kernel_tol, with a guard band
// [1 - 2 tol, 1 - tol) in |eigenvalue| counted as ambiguous.
struct IndexResult {
    long dim_ker_plus = 0;   // eigenvalues in [1 - kernel_tol, 1]
    long dim_ker_minus = 0;  // eigenvalues in [-1, -1 + kernel_tol]
    long theta = 0;          // dim_ker_plus - dim_ker_minus
    long ambiguous = 0;
};

IndexResult index_of_pair(const ShiftOperator& t, double kernel_tol);

// Max-norm residuals of the two projection power identities
//   (P-Q)^{2n-1} = (P(1-Q))^n - ((1-P)Q)^n
//   (P-Q)^{2n}   = (P(1-Q)P)^n + ((1-P)Q(1-P))^n
// P and Q must be orthogonal projections (symmetry and idempotency checked).
std::pair<double, double> projection_power_identities(const Eigen::MatrixXd& p,
                                                      const Eigen::MatrixXd& q, int n);

// Consequences of a sign-definite perturbation alpha (B - A) >= 0: the kernel
// of T + alpha is empty, theta = alpha dim ker(T - alpha), and T^2 has an
// eigenvalue at 1 exactly when theta != 0, all resolved at kernel_tol.
struct SignDefiniteReport {
    int alpha = 1;
    long xi = 0;
    double trace = 0.0;
    IndexResult index;
    bool no_kernel_at_minus_alpha = false;
    bool theta_equals_signed_kernel_dim = false;
    bool unit_square_eigenvalue_iff_theta = false;
    bool degenerate = false;

    bool all_pass() const {
        return no_kernel_at_minus_alpha && theta_equals_signed_kernel_dim &&
               unit_square_eigenvalue_iff_theta;
    }
};

SignDefiniteReport sign_definite_checks(const SpectralData& a, const SpectralData& b, double E,
                                        int alpha, double kernel_tol, double eig_tol);

}  // namespace andersonlab
