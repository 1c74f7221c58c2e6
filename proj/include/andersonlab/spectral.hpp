#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>

#include "andersonlab/model.hpp"

namespace andersonlab {

// Full eigendecomposition of a symmetric operator. Eigenvalues ascending;
// every eigenvector is normalized with its first nonzero component positive.
struct SpectralData {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns
    double reconstruction_residual = 0.0;  // ||V L V^T - H||_F / max(1, ||H||_F)
};

SpectralData eig(const Eigen::MatrixXd& h);
SpectralData eig(const Hamiltonian& h);

double spectral_diameter(const SpectralData& sd);

// Largest singular value.
double operator_norm(const Eigen::MatrixXd& m);
double operator_norm(const Eigen::MatrixXcd& m);

// Schatten p-(quasi-)norm from singular values; p >= some positive value,
// quasi-norm branch for 0 < p < 1.
double schatten_norm(const Eigen::MatrixXd& m, double p);
double schatten_norm(const Eigen::MatrixXcd& m, double p);

// #( eigenvalues <= E ); sets *degenerate when some eigenvalue lies within
// eig_tol of E (the closed-interval convention makes the count ambiguous there).
long counting_function(const SpectralData& sd, double E, double eig_tol,
                       bool* degenerate = nullptr);

struct LocalBlock {
    SiteSet a, b;
    Eigen::MatrixXcd block;  // |a| x |b|
};

// chi_a (H - z)^{-1} chi_b. Requires Im z != 0, or z strictly below the
// spectrum (checked through a Cholesky attempt on H - z).
LocalBlock resolvent_block(const Hamiltonian& h, std::complex<double> z, const SiteSet& a,
                           const SiteSet& b);

// Rows/columns of a dense matrix on site sets.
Eigen::MatrixXd select_block(const Eigen::MatrixXd& m, const SiteSet& a, const SiteSet& b);
Eigen::MatrixXcd select_block(const Eigen::MatrixXcd& m, const SiteSet& a, const SiteSet& b);

// One factorization of H - z reused for many blocks; solved columns are cached.
class ResolventFactor {
  public:
    ResolventFactor(const Hamiltonian& h, std::complex<double> z);
    Eigen::MatrixXcd block(const SiteSet& a, const SiteSet& b);

  private:
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    std::map<long, Eigen::VectorXcd> columns_;
    long n_ = 0;
};

}  // namespace andersonlab
