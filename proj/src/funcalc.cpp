#include "andersonlab/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "andersonlab/errors.hpp"

namespace andersonlab {

// ---- piecewise-cubic helpers -------------------------------------------------

namespace {

inline double peval(const std::array<double, 4>& c, double t) {
    return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
}

inline double pderiv(const std::array<double, 4>& c, double t) {
    return c[1] + t * (2.0 * c[2] + t * 3.0 * c[3]);
}

// Roots of the derivative quadratic inside (0, len), ascending.
std::vector<double> extrema_in(const std::array<double, 4>& c, double len) {
    std::vector<double> out;
    double a = 3.0 * c[3], b = 2.0 * c[2], d = c[1];
    auto push = [&](double t) {
        if (t > 0.0 && t < len) out.push_back(t);
    };
    if (a == 0.0) {
        if (b != 0.0) push(-d / b);
    } else {
        double disc = b * b - 4.0 * a * d;
        if (disc >= 0.0) {
            double q = -0.5 * (b + std::copysign(std::sqrt(disc), b == 0.0 ? 1.0 : b));
            if (q != 0.0) push(d / q);
            push(q / a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Integral of |p'| over [0, len]: total variation of the cubic piece.
double variation_of_piece(const std::array<double, 4>& c, double len) {
    double acc = 0.0, prev_t = 0.0, prev_v = peval(c, 0.0);
    auto ext = extrema_in(c, len);
    ext.push_back(len);
    for (double t : ext) {
        double v = peval(c, t);
        acc += std::abs(v - prev_v);
        prev_t = t;
        prev_v = v;
    }
    (void)prev_t;
    return acc;
}

inline double antiderivative(const std::array<double, 4>& c, double t) {
    return t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)));
}

// Integral of |p| over [0, len]: split into monotone segments, bisect sign
// changes, then sum |integral| over sign-constant parts.
double abs_integral_of_piece(const std::array<double, 4>& c, double len) {
    std::vector<double> cuts = extrema_in(c, len);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(len);
    std::vector<double> knots;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        knots.push_back(cuts[i]);
        double lo = cuts[i], hi = cuts[i + 1];
        double flo = peval(c, lo), fhi = peval(c, hi);
        if (flo == 0.0 || fhi == 0.0 || (flo < 0.0) == (fhi < 0.0)) continue;
        for (int it = 0; it < 80; ++it) {  // monotone on this segment
            double mid = 0.5 * (lo + hi);
            double fm = peval(c, mid);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        knots.push_back(0.5 * (lo + hi));
    }
    knots.push_back(len);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < knots.size(); ++i)
        acc += std::abs(antiderivative(c, knots[i + 1]) - antiderivative(c, knots[i]));
    return acc;
}

void check_shape(const BVFunction& f) {
    if (f.breaks.empty()) throw PreconditionError("BV function needs at least one breakpoint");
    if (f.poly.size() + 1 != f.breaks.size())
        throw PreconditionError("BV function piece count must be breaks - 1");
    for (size_t i = 0; i + 1 < f.breaks.size(); ++i)
        if (!(f.breaks[i] < f.breaks[i + 1]))
            throw PreconditionError("BV function breakpoints must increase strictly");
}

}  // namespace

// ---- BVFunction ---------------------------------------------------------------

double BVFunction::operator()(double x) const {
    if (breaks.empty()) return left_value;
    if (x <= breaks.front()) return left_value;
    if (x > breaks.back()) return right_value;
    size_t idx = static_cast<size_t>(std::lower_bound(breaks.begin(), breaks.end(), x) -
                                     breaks.begin());
    return peval(poly[idx - 1], x - breaks[idx - 1]);
}

double BVFunction::derivative(double x) const {
    if (breaks.empty() || x <= breaks.front() || x > breaks.back()) return 0.0;
    size_t idx = static_cast<size_t>(std::lower_bound(breaks.begin(), breaks.end(), x) -
                                     breaks.begin());
    return pderiv(poly[idx - 1], x - breaks[idx - 1]);
}

double BVFunction::left_limit(size_t i) const {
    if (i == 0) return left_value;
    return peval(poly[i - 1], breaks[i] - breaks[i - 1]);
}

double BVFunction::right_limit(size_t i) const {
    if (i + 1 == breaks.size()) return right_value;
    return poly[i][0];
}

double BVFunction::jump(size_t i) const { return right_limit(i) - left_limit(i); }

std::vector<double> BVFunction::jump_points(double tol) const {
    std::vector<double> out;
    for (size_t i = 0; i < breaks.size(); ++i)
        if (std::abs(jump(i)) > tol) out.push_back(breaks[i]);
    return out;
}

BVFunction indicator(double E) {
    BVFunction f;
    f.breaks = {E};
    f.left_value = 1.0;
    f.right_value = 0.0;
    return f;
}

BVFunction ramp(double E, double width) {
    if (!(width > 0.0)) throw PreconditionError("ramp width must be > 0");
    BVFunction f;
    f.breaks = {E - width / 2.0, E + width / 2.0};
    f.poly = {{1.0, 0.0, -3.0 / (width * width), 2.0 / (width * width * width)}};
    f.left_value = 1.0;
    f.right_value = 0.0;
    return f;
}

BVFunction bump(double center, double half_width) {
    if (!(half_width > 0.0)) throw PreconditionError("bump half width must be > 0");
    double w = half_width;
    BVFunction f;
    f.breaks = {center - w, center, center + w};
    f.poly = {{0.0, 0.0, 3.0 / (w * w), -2.0 / (w * w * w)},
              {1.0, 0.0, -3.0 / (w * w), 2.0 / (w * w * w)}};
    f.left_value = 0.0;
    f.right_value = 0.0;
    return f;
}

BVFunction table_function(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw PreconditionError("table needs at least two points");
    BVFunction f;
    for (size_t i = 0; i < points.size(); ++i) {
        f.breaks.push_back(points[i].first);
        if (i + 1 < points.size()) {
            double dx = points[i + 1].first - points[i].first;
            if (!(dx > 0.0)) throw PreconditionError("table abscissae must increase strictly");
            f.poly.push_back({points[i].second,
                              (points[i + 1].second - points[i].second) / dx, 0.0, 0.0});
        }
    }
    f.left_value = points.front().second;
    f.right_value = points.back().second;
    return f;
}

double total_variation(const BVFunction& f) {
    check_shape(f);
    double acc = 0.0;
    for (size_t i = 0; i < f.breaks.size(); ++i) acc += std::abs(f.jump(i));
    for (size_t i = 0; i < f.poly.size(); ++i)
        acc += variation_of_piece(f.poly[i], f.breaks[i + 1] - f.breaks[i]);
    return acc;
}

bool compactly_supported(const BVFunction& f) {
    return f.left_value == 0.0 && f.right_value == 0.0;
}

double jump_roundoff_tol(const BVFunction& f) { return 1e-10 * (1.0 + total_variation(f)); }

double l1_norm(const BVFunction& f) {
    check_shape(f);
    if (!compactly_supported(f)) throw PreconditionError("L1 norm needs compact support");
    double acc = 0.0;
    for (size_t i = 0; i < f.poly.size(); ++i)
        acc += abs_integral_of_piece(f.poly[i], f.breaks[i + 1] - f.breaks[i]);
    return acc;
}

BVFunction truncate_below(const BVFunction& f, double cut) {
    check_shape(f);
    if (f.right_value != 0.0)
        throw PreconditionError("truncation needs a vanishing right tail");
    if (f.left_value == 0.0) return f;
    if (!(cut < f.breaks.front()))
        throw PreconditionError("truncation point must lie below the first breakpoint");
    BVFunction h;
    h.breaks.reserve(f.breaks.size() + 1);
    h.breaks.push_back(cut);
    h.breaks.insert(h.breaks.end(), f.breaks.begin(), f.breaks.end());
    h.poly.reserve(f.poly.size() + 1);
    h.poly.push_back({f.left_value, 0.0, 0.0, 0.0});
    h.poly.insert(h.poly.end(), f.poly.begin(), f.poly.end());
    h.left_value = 0.0;
    h.right_value = 0.0;
    return h;
}

// ---- spectral route -----------------------------------------------------------

Eigen::MatrixXd apply_function_spectral(const SpectralData& sd, const BVFunction& f,
                                        double eig_tol, bool* degenerate) {
    check_shape(f);
    auto jumps = f.jump_points(jump_roundoff_tol(f));
    bool close = false;
    Eigen::VectorXd fx(sd.eigenvalues.size());
    for (long i = 0; i < sd.eigenvalues.size(); ++i) {
        fx[i] = f(sd.eigenvalues[i]);
        for (double j : jumps)
            if (std::abs(sd.eigenvalues[i] - j) <= eig_tol) close = true;
    }
    if (degenerate) *degenerate = close;
    return sd.eigenvectors * fx.asDiagonal() * sd.eigenvectors.transpose();
}

Eigen::MatrixXd fermi_projection(const SpectralData& sd, double E) {
    Eigen::VectorXd fx(sd.eigenvalues.size());
    for (long i = 0; i < sd.eigenvalues.size(); ++i) fx[i] = sd.eigenvalues[i] <= E ? 1.0 : 0.0;
    return sd.eigenvectors * fx.asDiagonal() * sd.eigenvectors.transpose();
}

// ---- cutoff ---------------------------------------------------------------------

double cutoff_ramp(double t) {
    double a = std::abs(t);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double u = a - 1.0;  // in (0,1)
    double pn = std::exp(-1.0 / (1.0 - u));
    double pd = std::exp(-1.0 / u);
    return pn / (pn + pd);
}

double cutoff_ramp_derivative(double t) {
    double a = std::abs(t);
    if (a <= 1.0 || a >= 2.0) return 0.0;
    double u = a - 1.0;
    double pn = std::exp(-1.0 / (1.0 - u));
    double pd = std::exp(-1.0 / u);
    double dn = pn / ((1.0 - u) * (1.0 - u));  // d pn / du
    double dd = pd / (u * u);                  // d pd / du
    // g below is dg/du < 0; the chain rule through u = |t| - 1 flips it for t < 0
    double g = (-dn * (pn + pd) - pn * (-dn + dd)) / ((pn + pd) * (pn + pd));
    return t > 0.0 ? g : -g;
}

// ---- resolvent-measure quadrature ----------------------------------------------

namespace {

struct CutoffFrame {
    double cx, wx, wy;
    double xi_x(double x) const { return cutoff_ramp((x - cx) / wx); }
    double xi_y(double y) const { return cutoff_ramp(y / wy); }
    double dxi_y(double y) const { return cutoff_ramp_derivative(y / wy) / wy; }
};

void add_jump_column(HSQuadrature& q, const CutoffFrame& frame, double x, double h,
                     double floor_y, double resolution) {
    double top = 2.0 * frame.wy;
    floor_y = std::min(floor_y, 0.5 * top);
    long panels = static_cast<long>(std::ceil(resolution * std::log10(top / floor_y)));
    panels = std::max<long>(panels, 4);
    double du = std::log(top / floor_y) / static_cast<double>(panels);
    double xi_x = frame.xi_x(x);
    for (long k = 0; k < panels; ++k) {
        double y = floor_y * std::exp((static_cast<double>(k) + 0.5) * du);
        double wgt = h * y * du * frame.xi_y(y) * xi_x;
        if (wgt != 0.0) q.nodes.push_back({x, y, {wgt, 0.0}});
    }
}

}  // namespace

HSQuadrature hs_measure(const BVFunction& f0, double y_min, double resolution,
                        double truncation) {
    check_shape(f0);
    if (!(y_min > 0.0)) throw PreconditionError("y_min must be > 0");
    if (!(resolution >= 4.0)) throw PreconditionError("resolution must be >= 4");

    BVFunction f = f0;
    if (f.right_value != 0.0)
        throw PreconditionError("resolvent representation needs a vanishing right tail");
    if (f.left_value != 0.0) {
        if (!std::isfinite(truncation))
            throw PreconditionError(
                "left-constant function needs a truncation point below the spectrum");
        f = truncate_below(f0, truncation);
    }

    HSQuadrature q;
    q.y_min = y_min;
    q.resolution = resolution;
    q.truncation = f0.left_value != 0.0 ? truncation : -INFINITY;
    // The truncation atom sits below the spectrum by contract.
    double tolj = jump_roundoff_tol(f0);
    q.jumps = f0.jump_points(tolj);

    CutoffFrame frame;
    frame.wy = 0.5;
    double slo = f.breaks.front(), shi = f.breaks.back();
    frame.cx = 0.5 * (slo + shi);
    frame.wx = 0.5 * (shi - slo) + 0.5;

    // Atoms of df at the breakpoints; roundoff-scale mismatches are dropped.
    for (size_t i = 0; i < f.breaks.size(); ++i) {
        double h = f.jump(i);
        if (std::abs(h) > tolj) add_jump_column(q, frame, f.breaks[i], h, y_min, resolution);
    }

    // Staircase discretization of the absolutely continuous part of df. The
    // pointwise staircase error is half a panel variation, and a panel mass
    // also caps the excision spike when a micro-jump lands on an eigenvalue.
    for (size_t i = 0; i < f.poly.size(); ++i) {
        const auto& c = f.poly[i];
        if (c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) continue;
        double x0 = f.breaks[i], len = f.breaks[i + 1] - x0;
        long m = static_cast<long>(std::ceil(32.0 * resolution));
        double dx = len / static_cast<double>(m);
        double floor_y = std::max(y_min, 0.125 * dx);
        for (long k = 0; k < m; ++k) {
            double mass = peval(c, (k + 1) * dx) - peval(c, k * dx);
            if (mass != 0.0)
                add_jump_column(q, frame, x0 + (k + 0.5) * dx, mass, floor_y, resolution);
        }
    }

    // Cutoff term f(x) * i dXi/dy on the band wy <= y <= 2wy. The dXi/dx part
    // vanishes identically because the x-plateau covers supp f.
    long m2y = std::max<long>(8, static_cast<long>(std::ceil(resolution / 2.0)));
    double dy = frame.wy / static_cast<double>(m2y);
    for (size_t i = 0; i < f.poly.size(); ++i) {
        const auto& c = f.poly[i];
        double x0 = f.breaks[i], len = f.breaks[i + 1] - x0;
        long m2 = std::max<long>(4, static_cast<long>(std::ceil(4.0 * resolution)));
        double dx = len / static_cast<double>(m2);
        for (long k = 0; k < m2; ++k) {
            double x = x0 + (k + 0.5) * dx;
            double hx = peval(c, x - x0);
            if (hx == 0.0) continue;
            for (long l = 0; l < m2y; ++l) {
                double y = frame.wy + (static_cast<double>(l) + 0.5) * dy;
                double wgt = hx * frame.dxi_y(y) * frame.xi_x(x) * dx * dy;
                if (wgt != 0.0) q.nodes.push_back({x, y, {0.0, wgt}});
            }
        }
    }

    double mass = 0.0;
    for (const auto& n : q.nodes) mass += std::abs(n.w);
    q.total_abs_weight = 2.0 * mass;  // mirror nodes

    double grad_bound = 2.0 * std::sqrt(1.0 / (frame.wx * frame.wx) +
                                        1.0 / (frame.wy * frame.wy));
    double delta = 2.0 * frame.wy;
    q.mass_bound = 2.0 * delta * (total_variation(f) + 2.0 * l1_norm(f) * grad_bound);
    return q;
}

double default_y_min(const BVFunction& f, const SpectralData& sd) {
    double scale = spectral_diameter(sd);
    if (scale <= 0.0) scale = 1.0;
    auto jumps = f.jump_points(jump_roundoff_tol(f));
    if (!jumps.empty()) {
        double gap = INFINITY;
        for (double x : jumps)
            for (long i = 0; i < sd.eigenvalues.size(); ++i)
                gap = std::min(gap, std::abs(x - sd.eigenvalues[i]));
        scale = gap;
    }
    return 1e-4 * scale;
}

namespace {

// Resolvent columns through one orthogonal tridiagonal reduction H = Q T Q^T,
// then an O(n) pivoted solve of (T - z) per quadrature node.
class TridiagResolvent {
  public:
    explicit TridiagResolvent(const Eigen::MatrixXd& h) {
        Eigen::Tridiagonalization<Eigen::MatrixXd> tri(h);
        q_ = tri.matrixQ();
        diag_ = tri.diagonal();
        sub_ = tri.subDiagonal();
    }

    // chi_a (H - z)^{-1} chi_b
    Eigen::MatrixXcd block(std::complex<double> z, const SiteSet& a, const SiteSet& b) const {
        long n = diag_.size();
        Eigen::MatrixXcd rhs(n, static_cast<long>(b.size()));
        for (size_t j = 0; j < b.size(); ++j)
            rhs.col(static_cast<long>(j)) = q_.row(b[j]).transpose().cast<std::complex<double>>();

        // Pivoted elimination on the three bands (fill-in band d).
        Eigen::VectorXcd lo(n), di(n), up(n), d2(n);
        for (long i = 0; i < n; ++i) {
            di[i] = diag_[i] - z;
            lo[i] = i > 0 ? std::complex<double>(sub_[i - 1]) : 0.0;
            up[i] = i + 1 < n ? std::complex<double>(sub_[i]) : 0.0;
            d2[i] = 0.0;
        }
        for (long k = 0; k + 1 < n; ++k) {
            if (std::abs(lo[k + 1]) > std::abs(di[k])) {
                std::swap(di[k], lo[k + 1]);
                std::swap(up[k], di[k + 1]);
                std::swap(d2[k], up[k + 1]);
                rhs.row(k).swap(rhs.row(k + 1));
            }
            if (di[k] == 0.0) throw NumericError("singular shifted operator in quadrature");
            std::complex<double> m = lo[k + 1] / di[k];
            di[k + 1] -= m * up[k];
            up[k + 1] -= m * d2[k];
            rhs.row(k + 1) -= m * rhs.row(k);
        }
        if (di[n - 1] == 0.0) throw NumericError("singular shifted operator in quadrature");
        for (long i = n - 1; i >= 0; --i) {
            if (i + 1 < n) rhs.row(i) -= up[i] * rhs.row(i + 1);
            if (i + 2 < n) rhs.row(i) -= d2[i] * rhs.row(i + 2);
            rhs.row(i) /= di[i];
        }

        Eigen::MatrixXcd out(static_cast<long>(a.size()), static_cast<long>(b.size()));
        for (size_t i = 0; i < a.size(); ++i)
            out.row(static_cast<long>(i)) =
                q_.row(a[i]).cast<std::complex<double>>() * rhs;
        return out;
    }

  private:
    Eigen::MatrixXd q_;
    Eigen::VectorXd diag_, sub_;
};

}  // namespace

LocalBlock apply_function_hs(const Hamiltonian& h, const HSQuadrature& q, const SiteSet& a,
                             const SiteSet& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed in gap check");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    double diam = ev[ev.size() - 1] - ev[0];
    double gap_tol = 1e-6 * (diam > 0.0 ? diam : 1.0);
    for (double x : q.jumps) {
        double gap = INFINITY;
        for (long i = 0; i < ev.size(); ++i) gap = std::min(gap, std::abs(x - ev[i]));
        if (gap < gap_tol)
            throw PreconditionError("function jump at " + std::to_string(x) +
                                    " lies within gap_tol of the spectrum");
    }
    if (std::isfinite(q.truncation) && !(q.truncation < ev[0]))
        throw PreconditionError("truncation point is not below the spectrum");

    TridiagResolvent solver_t(h.matrix);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<long>(a.size()),
                                                  static_cast<long>(b.size()));
    for (const auto& node : q.nodes) acc += node.w * solver_t.block({node.x, node.y}, a, b);

    LocalBlock out;
    out.a = a;
    out.b = b;
    out.block = (acc.real() / M_PI).cast<std::complex<double>>();
    return out;
}

}  // namespace andersonlab
