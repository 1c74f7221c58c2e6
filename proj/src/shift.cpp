#include "andersonlab/shift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "andersonlab/errors.hpp"

namespace andersonlab {

namespace {

// #( sorted values <= E ), the closed-interval counting convention.
long count_leq(const Eigen::VectorXd& sorted, double E) {
    const double* begin = sorted.data();
    const double* end = begin + sorted.size();
    return std::upper_bound(begin, end, E) - begin;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int n) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) out = out * m;
    return out;
}

void require_projection(const Eigen::MatrixXd& p, const char* name) {
    const double tol = 1e-10;
    if (p.rows() != p.cols() || (p - p.transpose()).cwiseAbs().maxCoeff() > tol ||
        (p * p - p).cwiseAbs().maxCoeff() > tol)
        throw PreconditionError(std::string(name) + " is not an orthogonal projection");
}

}  // namespace

ShiftOperator shift_operator(const SpectralData& a, const SpectralData& b, double E,
                             double eig_tol) {
    if (a.eigenvalues.size() != b.eigenvalues.size())
        throw PreconditionError("shift operator needs operators of equal dimension");
    ShiftOperator t;
    t.energy = E;
    t.matrix = fermi_projection(a, E) - fermi_projection(b, E);

    bool da = false, db = false;
    counting_function(a, E, eig_tol, &da);
    counting_function(b, E, eig_tol, &db);
    t.degenerate = da || db;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.matrix, Eigen::EigenvaluesOnly);
    t.eigenvalues = es.eigenvalues();
    t.singular_values = t.eigenvalues.cwiseAbs();
    std::sort(t.singular_values.data(), t.singular_values.data() + t.singular_values.size(),
              std::greater<double>());
    if (!t.eigenvalues.size() || t.singular_values[0] > 1.0 + eig_tol)
        throw NumericError("difference of projections escaped [-1, 1]");
    return t;
}

long ssf_counting(const SpectralData& a, const SpectralData& b, double E, double eig_tol,
                  bool* degenerate) {
    if (a.eigenvalues.size() != b.eigenvalues.size())
        throw PreconditionError("counting difference needs operators of equal dimension");
    bool da = false, db = false;
    long xi = counting_function(a, E, eig_tol, &da) - counting_function(b, E, eig_tol, &db);
    if (degenerate) *degenerate = da || db;
    return xi;
}

double krein_residual(const SpectralData& a, const SpectralData& b, const BVFunction& f,
                      double lo, double hi, long panels, double eig_tol) {
    if (!(lo < hi) || panels < 1)
        throw PreconditionError("trace-identity quadrature needs lo < hi and panels >= 1");
    if (!f.jump_points(jump_roundoff_tol(f)).empty())
        throw PreconditionError("trace-identity quadrature needs a jump-free function");
    if (f.breaks.front() < lo || f.breaks.back() > hi)
        throw PreconditionError("the derivative support must lie inside the quadrature window");
    if (a.eigenvalues.size() != b.eigenvalues.size())
        throw PreconditionError("trace identity needs operators of equal dimension");

    double trace_diff = 0.0;
    for (long i = 0; i < a.eigenvalues.size(); ++i)
        trace_diff += f(a.eigenvalues[i]) - f(b.eigenvalues[i]);

    double dx = (hi - lo) / static_cast<double>(panels);
    double integral = 0.0;
    for (long k = 0; k < panels; ++k) {
        double x = lo + (static_cast<double>(k) + 0.5) * dx;
        double fp = f.derivative(x);
        if (fp == 0.0) continue;
        integral += fp * static_cast<double>(ssf_counting(a, b, x, eig_tol)) * dx;
    }
    return std::abs(trace_diff + integral);
}

double birman_solomyak_residual(const Eigen::MatrixXd& h, const Eigen::MatrixXd& w,
                                double interval_lo, double interval_hi, long e_panels,
                                long s_panels) {
    if (!(interval_lo < interval_hi))
        throw PreconditionError("coupling-constant identity needs a nonempty interval");
    if (e_panels < 1 || s_panels < 1)
        throw PreconditionError("coupling-constant identity needs panels >= 1 on both grids");
    if (h.rows() != h.cols() || w.rows() != w.cols() || h.rows() != w.rows())
        throw PreconditionError("coupling-constant identity needs square operators of equal size");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses;
    ses.compute(h, Eigen::EigenvaluesOnly);
    Eigen::VectorXd spec_h = ses.eigenvalues();
    ses.compute(h + w, Eigen::EigenvaluesOnly);
    Eigen::VectorXd spec_hw = ses.eigenvalues();

    // xi(E, H, H+W) integrated over I, midpoint panels.
    double de = (interval_hi - interval_lo) / static_cast<double>(e_panels);
    double lhs = 0.0;
    for (long k = 0; k < e_panels; ++k) {
        double e = interval_lo + (static_cast<double>(k) + 0.5) * de;
        lhs += static_cast<double>(count_leq(spec_h, e) - count_leq(spec_hw, e)) * de;
    }

    // Tr(W 1_I(H + sW)) integrated over the coupling constant.
    double ds = 1.0 / static_cast<double>(s_panels);
    double rhs = 0.0;
    for (long j = 0; j < s_panels; ++j) {
        double s = (static_cast<double>(j) + 0.5) * ds;
        ses.compute(h + s * w);
        const Eigen::VectorXd& lam = ses.eigenvalues();
        double tr = 0.0;
        for (long i = 0; i < lam.size(); ++i)
            if (lam[i] >= interval_lo && lam[i] <= interval_hi)
                tr += ses.eigenvectors().col(i).dot(w * ses.eigenvectors().col(i));
        rhs += tr * ds;
    }
    return std::abs(lhs - rhs);
}

IndexResult index_of_pair(const ShiftOperator& t, double kernel_tol) {
    if (!(kernel_tol > 0.0)) throw PreconditionError("kernel_tol must be positive");
    IndexResult r;
    for (long i = 0; i < t.eigenvalues.size(); ++i) {
        double v = t.eigenvalues[i];
        if (v >= 1.0 - kernel_tol)
            ++r.dim_ker_plus;
        else if (v <= -1.0 + kernel_tol)
            ++r.dim_ker_minus;
        else if (std::abs(v) >= 1.0 - 2.0 * kernel_tol)
            ++r.ambiguous;
    }
    r.theta = r.dim_ker_plus - r.dim_ker_minus;
    return r;
}

std::pair<double, double> projection_power_identities(const Eigen::MatrixXd& p,
                                                      const Eigen::MatrixXd& q, int n) {
    if (n < 1) throw PreconditionError("power identities need n >= 1");
    require_projection(p, "the first factor");
    require_projection(q, "the second factor");
    if (p.rows() != q.rows())
        throw PreconditionError("power identities need projections of equal dimension");

    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    Eigen::MatrixXd d = p - q;
    Eigen::MatrixXd odd =
        matrix_power(p * (id - q), n) - matrix_power((id - p) * q, n) - matrix_power(d, 2 * n - 1);
    Eigen::MatrixXd even = matrix_power(p * (id - q) * p, n) +
                           matrix_power((id - p) * q * (id - p), n) - matrix_power(d, 2 * n);
    return {odd.cwiseAbs().maxCoeff(), even.cwiseAbs().maxCoeff()};
}

SignDefiniteReport sign_definite_checks(const SpectralData& a, const SpectralData& b, double E,
                                        int alpha, double kernel_tol, double eig_tol) {
    if (alpha != 1 && alpha != -1) throw PreconditionError("alpha must be +1 or -1");
    Eigen::MatrixXd ma = a.eigenvectors * a.eigenvalues.asDiagonal() * a.eigenvectors.transpose();
    Eigen::MatrixXd mb = b.eigenvectors * b.eigenvalues.asDiagonal() * b.eigenvectors.transpose();
    Eigen::MatrixXd diff = static_cast<double>(alpha) * (mb - ma);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -eig_tol)
        throw PreconditionError("the perturbation is not sign-definite for the given alpha");

    SignDefiniteReport rep;
    rep.alpha = alpha;
    ShiftOperator t = shift_operator(a, b, E, eig_tol);
    rep.degenerate = t.degenerate;
    rep.trace = t.matrix.trace();
    rep.xi = ssf_counting(a, b, E, eig_tol);
    rep.index = index_of_pair(t, kernel_tol);

    long ker_alpha = alpha == 1 ? rep.index.dim_ker_plus : rep.index.dim_ker_minus;
    long ker_minus_alpha = alpha == 1 ? rep.index.dim_ker_minus : rep.index.dim_ker_plus;
    rep.no_kernel_at_minus_alpha = ker_minus_alpha == 0;
    rep.theta_equals_signed_kernel_dim = rep.index.theta == alpha * ker_alpha;
    bool unit = t.singular_values.size() && t.singular_values[0] * t.singular_values[0] >=
                                                1.0 - kernel_tol;
    rep.unit_square_eigenvalue_iff_theta = unit == (rep.index.theta != 0);
    return rep;
}

}  // namespace andersonlab
