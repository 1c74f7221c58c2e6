#include "andersonlab/overlap.hpp"

#include <cmath>

#include "andersonlab/errors.hpp"

namespace andersonlab {

namespace {

void require_threshold(double zero_threshold) {
    if (!(zero_threshold > 0.0) || !(zero_threshold < 1.0))
        throw PreconditionError("zero_threshold must lie in (0, 1)");
}

OverlapResult from_log(double log_value, long n, const char* method, double zero_threshold) {
    OverlapResult r;
    r.log_value = log_value;
    r.value = std::exp(log_value);
    r.n_particles = n;
    r.method = method;
    r.zero_flag = !(log_value >= std::log(zero_threshold));
    return r;
}

// (1/power) sum log(1 - b_i) over eigenvalues b_i of a symmetric PSD
// contraction; b at or above 1 collapses the determinant.
double log_det_complement(const Eigen::VectorXd& b, double power) {
    double acc = 0.0;
    for (long i = 0; i < b.size(); ++i) {
        double bi = std::max(0.0, b[i]);
        if (bi >= 1.0) return -INFINITY;
        acc += std::log1p(-bi);
    }
    return acc / power;
}

void require_projection(const Eigen::MatrixXd& p, const char* name) {
    const double tol = 1e-8;
    if (p.rows() != p.cols() || (p - p.transpose()).cwiseAbs().maxCoeff() > tol ||
        (p * p - p).cwiseAbs().maxCoeff() > tol)
        throw PreconditionError(std::string(name) + " is not an orthogonal projection");
}

}  // namespace

OverlapResult overlap_matrix_det(const SpectralData& a, const SpectralData& b, long n,
                                 double zero_threshold) {
    require_threshold(zero_threshold);
    long dim = a.eigenvectors.cols();
    if (b.eigenvectors.cols() != dim || b.eigenvectors.rows() != a.eigenvectors.rows())
        throw PreconditionError("overlap needs operators of equal dimension");
    if (n < 1 || n > dim) throw PreconditionError("particle number out of range");

    Eigen::MatrixXd m = a.eigenvectors.leftCols(n).transpose() * b.eigenvectors.leftCols(n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    double log_det = 0.0;
    for (long i = 0; i < n; ++i) {
        double d = std::abs(lu.matrixLU()(i, i));
        if (d == 0.0) {
            log_det = -INFINITY;
            break;
        }
        log_det += std::log(d);
    }
    return from_log(log_det, n, "matrix-det", zero_threshold);
}

std::array<OverlapResult, 3> overlap_fredholm(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q,
                                              double zero_threshold) {
    require_threshold(zero_threshold);
    require_projection(p, "the first projection");
    require_projection(q, "the second projection");
    if (p.rows() != q.rows())
        throw PreconditionError("overlap needs projections of equal dimension");
    long rank_p = static_cast<long>(std::llround(p.trace()));
    long rank_q = static_cast<long>(std::llround(q.trace()));
    if (rank_p != rank_q)
        throw PreconditionError("overlap needs projections of equal rank");

    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

    Eigen::MatrixXd d = p - q;
    es.compute(Eigen::MatrixXd(d * d), Eigen::EigenvaluesOnly);
    auto first = from_log(log_det_complement(es.eigenvalues(), 4.0), rank_p, "fredholm-PQ",
                          zero_threshold);

    es.compute(Eigen::MatrixXd(p * (id - q) * p), Eigen::EigenvaluesOnly);
    auto second = from_log(log_det_complement(es.eigenvalues(), 2.0), rank_p, "fredholm-PQcP",
                           zero_threshold);

    es.compute(Eigen::MatrixXd((id - p) * q * (id - p)), Eigen::EigenvaluesOnly);
    auto third = from_log(log_det_complement(es.eigenvalues(), 2.0), rank_p, "fredholm-PcQPc",
                          zero_threshold);
    return {first, second, third};
}

OverlapResult ground_state_overlap(const SpectralData& a, const SpectralData& b, double E,
                                   double eig_tol, double zero_threshold) {
    require_threshold(zero_threshold);
    bool da = false, db = false;
    long n = counting_function(a, E, eig_tol, &da);
    counting_function(b, E, eig_tol, &db);
    OverlapResult r;
    if (n == 0) {
        r.method = "matrix-det";
    } else {
        r = overlap_matrix_det(a, b, n, zero_threshold);
    }
    r.degenerate = da || db;
    // A cluster straddling the filling boundary makes the Slater determinant
    // basis-dependent.
    long dim = a.eigenvalues.size();
    if (n > 0 && n < dim &&
        (a.eigenvalues[n] - a.eigenvalues[n - 1] < eig_tol ||
         b.eigenvalues[n] - b.eigenvalues[n - 1] < eig_tol))
        r.degenerate = true;
    return r;
}

OverlapResult infinite_volume_overlap_proxy(const ShiftOperator& t, double kernel_tol,
                                            double zero_threshold) {
    require_threshold(zero_threshold);
    if (!(kernel_tol > 0.0)) throw PreconditionError("kernel_tol must be positive");
    Eigen::VectorXd b = t.eigenvalues.cwiseProduct(t.eigenvalues);
    auto r = from_log(log_det_complement(b, 4.0), 0, "fredholm-PQ", zero_threshold);
    r.zero_flag = b.size() > 0 && b.maxCoeff() >= 1.0 - kernel_tol;
    return r;
}

double overlap_log_lower_bound(const ShiftOperator& t) {
    if (!t.singular_values.size()) return 0.0;
    double op = t.singular_values[0];
    if (op >= 1.0) return -INFINITY;
    return -t.eigenvalues.squaredNorm() / (1.0 - op * op);
}

}  // namespace andersonlab
