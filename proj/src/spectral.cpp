#include "andersonlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "andersonlab/errors.hpp"

namespace andersonlab {

SpectralData eig(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw PreconditionError("eig needs a square matrix");
    if (!h.isApprox(h.transpose(), 1e-12))
        throw PreconditionError("eig needs a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigensolver failed to converge on a " +
                           std::to_string(h.rows()) + "-dim matrix");

    SpectralData sd;
    sd.eigenvalues = solver.eigenvalues();
    sd.eigenvectors = solver.eigenvectors();

    // Deterministic sign: first nonzero component of each eigenvector positive.
    for (long j = 0; j < sd.eigenvectors.cols(); ++j) {
        for (long i = 0; i < sd.eigenvectors.rows(); ++i) {
            double v = sd.eigenvectors(i, j);
            if (v != 0.0) {
                if (v < 0.0) sd.eigenvectors.col(j) = -sd.eigenvectors.col(j);
                break;
            }
        }
    }

    double ref = std::max(1.0, h.norm());
    sd.reconstruction_residual =
        (sd.eigenvectors * sd.eigenvalues.asDiagonal() * sd.eigenvectors.transpose() - h).norm() /
        ref;
    return sd;
}

SpectralData eig(const Hamiltonian& h) { return eig(h.matrix); }

double spectral_diameter(const SpectralData& sd) {
    long n = sd.eigenvalues.size();
    return n == 0 ? 0.0 : sd.eigenvalues[n - 1] - sd.eigenvalues[0];
}

namespace {

template <typename Matrix>
Eigen::VectorXd singular_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

double schatten_from_singulars(const Eigen::VectorXd& s, double p) {
    if (!(p > 0.0)) throw PreconditionError("schatten_norm needs p > 0");
    if (std::isinf(p)) return s.size() ? s[0] : 0.0;
    double acc = 0.0;
    for (long i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
    return std::pow(acc, 1.0 / p);
}

}  // namespace

double operator_norm(const Eigen::MatrixXd& m) {
    Eigen::VectorXd s = singular_values(m);
    return s.size() ? s[0] : 0.0;
}

double operator_norm(const Eigen::MatrixXcd& m) {
    Eigen::VectorXd s = singular_values(m);
    return s.size() ? s[0] : 0.0;
}

double schatten_norm(const Eigen::MatrixXd& m, double p) {
    return schatten_from_singulars(singular_values(m), p);
}

double schatten_norm(const Eigen::MatrixXcd& m, double p) {
    return schatten_from_singulars(singular_values(m), p);
}

long counting_function(const SpectralData& sd, double E, double eig_tol, bool* degenerate) {
    long count = 0;
    bool close = false;
    for (long i = 0; i < sd.eigenvalues.size(); ++i) {
        if (sd.eigenvalues[i] <= E) ++count;
        if (std::abs(sd.eigenvalues[i] - E) <= eig_tol) close = true;
    }
    if (degenerate) *degenerate = close;
    return count;
}

Eigen::MatrixXd select_block(const Eigen::MatrixXd& m, const SiteSet& a, const SiteSet& b) {
    Eigen::MatrixXd out(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out(i, j) = m(a[i], b[j]);
    return out;
}

Eigen::MatrixXcd select_block(const Eigen::MatrixXcd& m, const SiteSet& a, const SiteSet& b) {
    Eigen::MatrixXcd out(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out(i, j) = m(a[i], b[j]);
    return out;
}

ResolventFactor::ResolventFactor(const Hamiltonian& h, std::complex<double> z) : n_(h.matrix.rows()) {
    if (z.imag() == 0.0) {
        Eigen::LLT<Eigen::MatrixXd> llt(h.matrix - z.real() * Eigen::MatrixXd::Identity(n_, n_));
        if (llt.info() != Eigen::Success)
            throw PreconditionError("real energy is not strictly below the spectrum");
    }
    Eigen::MatrixXcd shifted = h.matrix.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    lu_.compute(shifted);
}

Eigen::MatrixXcd ResolventFactor::block(const SiteSet& a, const SiteSet& b) {
    Eigen::MatrixXcd out(a.size(), b.size());
    for (size_t j = 0; j < b.size(); ++j) {
        long col = b[j];
        if (col < 0 || col >= n_) throw PreconditionError("site set b outside the box");
        auto it = columns_.find(col);
        if (it == columns_.end()) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n_);
            e[col] = 1.0;
            it = columns_.emplace(col, lu_.solve(e)).first;
        }
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] < 0 || a[i] >= n_) throw PreconditionError("site set a outside the box");
            out(static_cast<long>(i), static_cast<long>(j)) = it->second[a[i]];
        }
    }
    return out;
}

LocalBlock resolvent_block(const Hamiltonian& h, std::complex<double> z, const SiteSet& a,
                           const SiteSet& b) {
    long n = h.matrix.rows();
    for (long i : a)
        if (i < 0 || i >= n) throw PreconditionError("site set a outside the box");
    for (long j : b)
        if (j < 0 || j >= n) throw PreconditionError("site set b outside the box");

    if (z.imag() == 0.0) {
        // Real energy: admissible only strictly below the spectrum, certified
        // by positive definiteness of H - z.
        Eigen::LLT<Eigen::MatrixXd> llt(h.matrix - z.real() * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() != Eigen::Success)
            throw PreconditionError("real energy is not strictly below the spectrum");
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, static_cast<long>(b.size()));
        for (size_t j = 0; j < b.size(); ++j) rhs(b[j], static_cast<long>(j)) = 1.0;
        Eigen::MatrixXd cols = llt.solve(rhs);
        LocalBlock out;
        out.a = a;
        out.b = b;
        out.block.resize(a.size(), b.size());
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                out.block(i, j) = cols(a[i], static_cast<long>(j));
        return out;
    }

    Eigen::MatrixXcd shifted = h.matrix.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, static_cast<long>(b.size()));
    for (size_t j = 0; j < b.size(); ++j) rhs(b[j], static_cast<long>(j)) = 1.0;
    Eigen::MatrixXcd cols = lu.solve(rhs);

    LocalBlock out;
    out.a = a;
    out.b = b;
    out.block.resize(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out.block(i, j) = cols(a[i], static_cast<long>(j));
    return out;
}

}  // namespace andersonlab
