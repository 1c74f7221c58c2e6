#include <cmath>
#include <complex>

#include "andersonlab/rng.hpp"
#include "andersonlab/spectral.hpp"
#include "doctest.h"

using namespace andersonlab;

namespace {

Eigen::MatrixXd random_matrix(long rows, long cols, uint64_t seed, uint64_t stream) {
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            m(i, j) = 2.0 * uniform01(seed, stream, static_cast<uint64_t>(i * cols + j)) - 1.0;
    return m;
}

ModelConfig free_chain(int L, double spacing = 1.0) {
    ModelConfig cfg;
    cfg.sites_per_side = L;
    cfg.lattice_spacing = spacing;
    cfg.coupling = 0.0;
    return cfg;
}

}  // namespace

TEST_CASE("free chain reproduces the closed-form Dirichlet spectrum") {
    const int L = 5;
    auto cfg = free_chain(L);
    auto h = build_hamiltonian(cfg, sample_realization(cfg, 0));
    auto sd = eig(h);
    for (int m = 1; m <= L; ++m) {
        double expected = 2.0 - 2.0 * std::cos(m * M_PI / (L + 1));
        CHECK(sd.eigenvalues[m - 1] == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(sd.reconstruction_residual <= 1e-13);

    // Eigenvectors are discrete sines; the sign convention keeps the first
    // component sin(m pi / (L+1)) > 0.
    for (int m = 1; m <= L; ++m) {
        for (int j = 1; j <= L; ++j) {
            double expected = std::sqrt(2.0 / (L + 1)) * std::sin(j * m * M_PI / (L + 1));
            CHECK(sd.eigenvectors(j - 1, m - 1) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("lattice spacing scales the kinetic term by 1/h^2") {
    auto coarse = free_chain(8, 1.0);
    auto fine = free_chain(8, 0.5);
    auto sd1 = eig(build_hamiltonian(coarse, sample_realization(coarse, 0)));
    auto sd2 = eig(build_hamiltonian(fine, sample_realization(fine, 0)));
    for (long i = 0; i < sd1.eigenvalues.size(); ++i)
        CHECK(sd2.eigenvalues[i] == doctest::Approx(4.0 * sd1.eigenvalues[i]).epsilon(1e-12));
}

TEST_CASE("operator and Schatten norms against hand values") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 1) = 2.0;
    CHECK(operator_norm(m) == doctest::Approx(2.0));

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    CHECK(schatten_norm(d, 1.0) == doctest::Approx(7.0));
    CHECK(schatten_norm(d, 2.0) == doctest::Approx(5.0));
    double p = 0.5;
    double expected = std::pow(std::sqrt(3.0) + 2.0, 2.0);
    CHECK(schatten_norm(d, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(schatten_norm(d, 0.0), PreconditionError);
}

TEST_CASE("Schatten norm is nonincreasing in p and matches Frobenius at p=2") {
    for (uint64_t k = 0; k < 20; ++k) {
        Eigen::MatrixXd m = random_matrix(7, 7, 11, k);
        CHECK(schatten_norm(m, 2.0) == doctest::Approx(m.norm()).epsilon(1e-12));
        double prev = INFINITY;
        for (double p : {0.5, 1.0, 2.0, 4.0}) {
            double v = schatten_norm(m, p);
            CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
        }
        CHECK(operator_norm(m) <= prev * (1.0 + 1e-12));
    }
}

TEST_CASE("quasi-norm triangle inequality for p <= 1") {
    for (uint64_t k = 0; k < 50; ++k) {
        Eigen::MatrixXd a = random_matrix(6, 6, 21, 2 * k);
        Eigen::MatrixXd b = random_matrix(6, 6, 21, 2 * k + 1);
        Eigen::MatrixXd sum = a + b;
        for (double p : {0.25, 0.5, 1.0}) {
            double lhs = std::pow(schatten_norm(sum, p), p);
            double rhs = std::pow(schatten_norm(a, p), p) + std::pow(schatten_norm(b, p), p);
            CHECK(lhs <= rhs * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("counting function honors the closed-interval convention") {
    Eigen::MatrixXd d = Eigen::Vector4d(0.0, 1.0, 1.0, 2.0).asDiagonal();
    auto sd = eig(d);
    bool degenerate = false;
    CHECK(counting_function(sd, 1.0, 1e-9, &degenerate) == 3);  // eigenvalue at E counts
    CHECK(degenerate);
    CHECK(counting_function(sd, 0.5, 1e-9, &degenerate) == 1);
    CHECK(!degenerate);
    CHECK(counting_function(sd, -0.1, 1e-9) == 0);
    CHECK(counting_function(sd, 2.5, 1e-9) == 4);
}

TEST_CASE("resolvent block solves (H - z) R = 1 and obeys the 1/|Im z| bound") {
    ModelConfig cfg;
    cfg.sites_per_side = 24;
    cfg.coupling = 2.0;
    cfg.seed = 8;
    auto h = build_hamiltonian(cfg, sample_realization(cfg, 0));
    long n = h.matrix.rows();

    std::complex<double> z(1.3, 0.05);
    SiteSet all(n);
    for (long i = 0; i < n; ++i) all[i] = i;
    auto full = resolvent_block(h, z, all, all);
    Eigen::MatrixXcd shifted = h.matrix.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    CHECK((shifted * full.block - Eigen::MatrixXcd::Identity(n, n)).norm() <= 1e-10);

    SiteSet a = singleton(h.box, Coord{-5, 0});
    SiteSet b = singleton(h.box, Coord{7, 0});
    auto blk = resolvent_block(h, z, a, b);
    CHECK(operator_norm(blk.block) <= 1.0 / 0.05 + 1e-9);
    CHECK(blk.block(0, 0) == full.block(a[0], b[0]));

    ResolventFactor rf(h, z);
    CHECK(std::abs(rf.block(a, b)(0, 0) - blk.block(0, 0)) <= 1e-12);
    ResolventFactor rf2(h, z);
    CHECK(std::abs(rf2.block(a, b)(0, 0) - rf.block(a, b)(0, 0)) == 0.0);
}

TEST_CASE("real energies require positive definiteness of H - E") {
    ModelConfig cfg;
    cfg.sites_per_side = 10;
    cfg.coupling = 0.0;
    auto h = build_hamiltonian(cfg, sample_realization(cfg, 0));
    SiteSet a = {0}, b = {5};
    CHECK_NOTHROW(resolvent_block(h, {-1.0, 0.0}, a, b));
    CHECK_THROWS_AS(resolvent_block(h, {2.0, 0.0}, a, b), PreconditionError);

    // Below-spectrum real solve agrees with the complex path in the eta -> 0 limit.
    auto real_blk = resolvent_block(h, {-1.0, 0.0}, a, b);
    auto tiny = resolvent_block(h, {-1.0, 1e-9}, a, b);
    CHECK(std::abs(real_blk.block(0, 0).real() - tiny.block(0, 0).real()) <= 1e-7);
}

TEST_CASE("eig refuses non-symmetric input and reports convergence data") {
    Eigen::MatrixXd m = random_matrix(5, 5, 31, 0);
    CHECK_THROWS_AS(eig(m), PreconditionError);
    Eigen::MatrixXd s = m + m.transpose();
    auto sd = eig(s);
    CHECK(sd.reconstruction_residual <= 1e-13);
}
