#include "andersonlab/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "andersonlab/errors.hpp"

namespace andersonlab {

namespace {

constexpr double k_zero_threshold = 1e-300;

double pairwise_block(const double* v, long len) {
    if (len <= 8) {
        double s = 0.0;
        for (long i = 0; i < len; ++i) s += v[i];
        return s;
    }
    long half = len / 2;
    return pairwise_block(v, half) + pairwise_block(v + half, len - half);
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, size_t j) {
    std::vector<double> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][j];
    return out;
}

ModelConfig with_side(const ModelConfig& cfg, int sites_per_side) {
    ModelConfig c = cfg;
    c.sites_per_side = sites_per_side;
    return c;
}

int coord_norm(const Coord& c) { return std::max(std::abs(c[0]), std::abs(c[1])); }

// Scan points sorted by abscissa without reordering ties, so output order is
// schedule-independent.
void sort_points(std::vector<ScanPoint>& pts) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const ScanPoint& a, const ScanPoint& b) { return a.abscissa < b.abscissa; });
}

ScanPoint make_point(double abscissa, const EstimatorResult& r, bool excluded = false) {
    return {abscissa, r.mean, r.std_error, r.n, excluded};
}

void require_pairs(const std::vector<std::pair<Coord, Coord>>& pairs, const Box& box) {
    if (pairs.empty()) throw PreconditionError("the scan needs at least one site pair");
    for (const auto& p : pairs)
        if (!box.contains(p.first) || !box.contains(p.second))
            throw PreconditionError("a scan pair leaves the configured box");
}

// Schatten-1 norm of a symmetric matrix through its eigenvalues.
double trace_norm_symmetric(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
    return values.empty() ? 0.0 : pairwise_block(values.data(), static_cast<long>(values.size()));
}

double normal_quantile(double confidence) {
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw PreconditionError("confidence level must lie in (0, 1)");
    double z = 1.0;
    for (int it = 0; it < 80; ++it) {
        double f = std::erf(z / std::sqrt(2.0)) - confidence;
        double fp = std::sqrt(2.0 / M_PI) * std::exp(-0.5 * z * z);
        double step = f / fp;
        z -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return z;
}

EstimatorResult summarize(const std::string& statistic, const std::vector<double>& values,
                          uint64_t seed, double confidence) {
    if (values.empty()) throw PreconditionError("summary of an empty sample");
    EstimatorResult r;
    r.statistic = statistic;
    r.seed = seed;
    r.n = static_cast<long>(values.size());
    r.mean = pairwise_sum(values) / static_cast<double>(r.n);
    if (!std::isfinite(r.mean))
        throw NumericError("statistic '" + statistic + "' produced a non-finite mean");
    if (r.n > 1) {
        std::vector<double> sq(values.size());
        for (size_t i = 0; i < values.size(); ++i) {
            double d = values[i] - r.mean;
            sq[i] = d * d;
        }
        r.std_error = std::sqrt(pairwise_sum(sq) / static_cast<double>(r.n - 1) /
                                static_cast<double>(r.n));
    }
    double z = normal_quantile(confidence);
    r.ci_lo = r.mean - z * r.std_error;
    r.ci_hi = r.mean + z * r.std_error;
    return r;
}

WilsonInterval wilson_interval(long successes, long n, double confidence) {
    if (n < 1 || successes < 0 || successes > n)
        throw PreconditionError("ill-formed binomial sample");
    WilsonInterval w;
    w.successes = successes;
    w.n = n;
    w.p_hat = static_cast<double>(successes) / static_cast<double>(n);
    double z = normal_quantile(confidence);
    double z2n = z * z / static_cast<double>(n);
    double center = (w.p_hat + 0.5 * z2n) / (1.0 + z2n);
    double half = z *
                  std::sqrt(w.p_hat * (1.0 - w.p_hat) / static_cast<double>(n) +
                            0.25 * z2n / static_cast<double>(n)) /
                  (1.0 + z2n);
    // at the extremes one quadratic root is exactly the sample proportion
    w.lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    w.hi = successes == n ? 1.0 : std::min(1.0, center + half);
    return w;
}

int worker_count(long jobs) {
    if (jobs < 1) return 1;
    long cap = jobs;
    if (const char* env = std::getenv("ANDERSON_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0') cap = std::min(cap, std::max<long>(1, v));
    } else {
        unsigned hc = std::thread::hardware_concurrency();
        cap = std::min<long>(cap, hc ? hc : 1);
    }
    return static_cast<int>(std::min<long>(cap, 64));
}

std::vector<std::vector<double>> parallel_rows(
    long n, const std::function<std::vector<double>(long)>& row_fn) {
    if (n < 1) throw PreconditionError("disorder averages need n >= 1 realizations");
    std::vector<std::vector<double>> rows(static_cast<size_t>(n));
    std::atomic<long> next{0};
    std::mutex err_mutex;
    long err_index = -1;
    std::string err_what;
    Status err_status = Status::numeric_error;
    auto body = [&]() {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                rows[static_cast<size_t>(i)] = row_fn(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> guard(err_mutex);
                if (err_index < 0 || i < err_index) {
                    err_index = i;
                    err_what = e.what();
                    const Error* known = dynamic_cast<const Error*>(&e);
                    err_status = known ? known->status() : Status::numeric_error;
                }
            }
        }
    };
    int workers = worker_count(n);
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (err_index >= 0) {
        // a refusal raised inside a row stays a refusal at the top level
        std::string msg = "realization " + std::to_string(err_index) + " failed: " + err_what;
        switch (err_status) {
            case Status::config_error: throw ConfigError(msg);
            case Status::precondition_error: throw PreconditionError(msg);
            case Status::io_error: throw IoError(msg);
            default: throw NumericError(msg);
        }
    }
    return rows;
}

EstimatorResult mc_expectation(const std::string& name, const Statistic& statistic,
                               const ModelConfig& cfg, long n) {
    validate(cfg);
    std::vector<std::vector<double>> rows;
    try {
        rows = parallel_rows(n, [&](long r) {
            return std::vector<double>{statistic(cfg, sample_realization(cfg, r))};
        });
    } catch (const Error& e) {
        std::string msg = "statistic '" + name + "' under seed " + std::to_string(cfg.seed) +
                          ": " + e.what();
        switch (e.status()) {
            case Status::config_error: throw ConfigError(msg);
            case Status::precondition_error: throw PreconditionError(msg);
            case Status::io_error: throw IoError(msg);
            default: throw NumericError(msg);
        }
    }
    return summarize(name, column(rows, 0), cfg.seed);
}

DecayFit fit_exponential_decay(std::vector<ScanPoint> points) {
    DecayFit fit;
    fit.points = std::move(points);
    if (fit.points.empty()) {
        fit.note = "no points";
        return fit;
    }
    bool all_zero = true;
    for (const auto& p : fit.points)
        if (p.mean != 0.0) all_zero = false;
    if (all_zero) {
        fit.identically_zero = true;
        fit.note = "ordinates identically zero; fit skipped";
        return fit;
    }

    std::vector<size_t> use;
    for (size_t i = 0; i < fit.points.size(); ++i) {
        ScanPoint& p = fit.points[i];
        if (p.excluded) continue;
        if (!(p.mean > 0.0) || p.mean < 3.0 * p.std_error) {
            p.excluded = true;  // noise floor
            continue;
        }
        use.push_back(i);
    }
    fit.fit_points = static_cast<long>(use.size());
    if (use.size() < 3) {
        fit.note = "fewer than 3 points above the noise floor; fit skipped";
        return fit;
    }

    // Weights from the relative errors of the means (delta method on log);
    // deterministic ordinates carry equal weight.
    std::vector<double> x(use.size()), y(use.size()), w(use.size(), 1.0);
    double min_rel = INFINITY;
    for (size_t k = 0; k < use.size(); ++k) {
        const ScanPoint& p = fit.points[use[k]];
        x[k] = p.abscissa;
        y[k] = std::log(p.mean);
        double rel = p.std_error / p.mean;
        if (rel > 0.0) min_rel = std::min(min_rel, rel);
    }
    if (std::isfinite(min_rel)) {
        for (size_t k = 0; k < use.size(); ++k) {
            const ScanPoint& p = fit.points[use[k]];
            double rel = std::max(p.std_error / p.mean, min_rel);
            w[k] = 1.0 / (rel * rel);
        }
    }

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (size_t k = 0; k < use.size(); ++k) {
        sw += w[k];
        sx += w[k] * x[k];
        sy += w[k] * y[k];
    }
    double xb = sx / sw, yb = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < use.size(); ++k) {
        sxx += w[k] * (x[k] - xb) * (x[k] - xb);
        sxy += w[k] * (x[k] - xb) * (y[k] - yb);
    }
    if (sxx <= 0.0) {
        fit.note = "degenerate abscissa; fit skipped";
        return fit;
    }
    double slope = sxy / sxx;
    fit.mu = -slope;
    fit.log_c = yb - slope * xb;

    double ss_res = 0.0, ss_tot = 0.0, ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    for (size_t k = 0; k < y.size(); ++k) {
        double fitted_y = fit.log_c + slope * x[k];
        ss_res += (y[k] - fitted_y) * (y[k] - fitted_y);
        ss_tot += (y[k] - ybar) * (y[k] - ybar);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.fitted = true;
    return fit;
}

DecayFit fmb_scan(const ModelConfig& cfg, double E, const std::vector<double>& eta_grid, double s,
                  const std::vector<std::pair<Coord, Coord>>& pairs, long n) {
    validate(cfg);
    if (!(s > 0.0) || !(s < 1.0))
        throw PreconditionError("the fractional exponent must lie in (0, 1)");
    if (eta_grid.empty()) throw PreconditionError("the eta grid must be nonempty");
    for (double eta : eta_grid)
        if (!(eta > 0.0)) throw PreconditionError("the eta grid must stay strictly positive");
    Box box = cfg.box();
    require_pairs(pairs, box);

    size_t ne = eta_grid.size(), np = pairs.size();
    std::vector<SiteSet> sa(np), sb(np);
    for (size_t i = 0; i < np; ++i) {
        sa[i] = singleton(box, pairs[i].first);
        sb[i] = singleton(box, pairs[i].second);
    }

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        std::vector<double> row(ne * np);
        for (size_t ie = 0; ie < ne; ++ie) {
            ResolventFactor rf(h, {E, eta_grid[ie]});
            for (size_t ip = 0; ip < np; ++ip)
                row[ie * np + ip] = std::pow(operator_norm(rf.block(sa[ip], sb[ip])), s);
        }
        return row;
    });

    std::vector<ScanPoint> points;
    for (size_t ip = 0; ip < np; ++ip) {
        EstimatorResult best;
        for (size_t ie = 0; ie < ne; ++ie) {
            auto r = summarize("fmb", column(rows, ie * np + ip), cfg.seed);
            if (ie == 0 || r.mean > best.mean) best = r;
        }
        int dist = sup_distance(pairs[ip].first, pairs[ip].second);
        points.push_back(make_point(dist, best, dist == 0));
    }
    sort_points(points);
    auto fit = fit_exponential_decay(std::move(points));
    if (fit.note.empty()) fit.note = "ordinate is the eta-grid maximum of the averaged moment";
    return fit;
}

DecayFit kernel_decay_scan(const ModelConfig& cfg, const BVFunction& f, double p,
                           const std::vector<std::pair<Coord, Coord>>& pairs, long n) {
    validate(cfg);
    if (!(p > 0.0)) throw PreconditionError("the Schatten exponent must be positive");
    Box box = cfg.box();
    require_pairs(pairs, box);

    size_t np = pairs.size();
    std::vector<SiteSet> sa(np), sb(np);
    for (size_t i = 0; i < np; ++i) {
        sa[i] = singleton(box, pairs[i].first);
        sb[i] = singleton(box, pairs[i].second);
    }

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Hamiltonian ht = apply_perturbation(cfg, h, cfg.perturbation_strength);
        Eigen::MatrixXd k = apply_function_spectral(eig(h), f, cfg.eig_tol) -
                            apply_function_spectral(eig(ht), f, cfg.eig_tol);
        std::vector<double> row(np);
        for (size_t i = 0; i < np; ++i)
            row[i] = schatten_norm(select_block(k, sa[i], sb[i]), p);
        return row;
    });

    std::vector<ScanPoint> points;
    for (size_t i = 0; i < np; ++i)
        points.push_back(make_point(coord_norm(pairs[i].first) + coord_norm(pairs[i].second),
                                    summarize("kernel", column(rows, i), cfg.seed)));
    sort_points(points);
    return fit_exponential_decay(std::move(points));
}

DecayFit boundary_decay_scan(const ModelConfig& cfg, const BVFunction& f, double p,
                             const Box& subbox, const std::vector<std::pair<Coord, Coord>>& pairs,
                             long n) {
    validate(cfg);
    if (!(p > 0.0)) throw PreconditionError("the Schatten exponent must be positive");
    Box box = cfg.box();
    if (subbox.dimension != box.dimension)
        throw PreconditionError("the sub-box must share the box dimension");
    for (int ax = 0; ax < box.dimension; ++ax)
        if (subbox.lo[ax] < box.lo[ax] + 1 ||
            subbox.lo[ax] + subbox.extent[ax] > box.lo[ax] + box.extent[ax] - 1)
            throw PreconditionError("the sub-box needs one site of Dirichlet margin");
    require_pairs(pairs, subbox);

    size_t np = pairs.size();
    std::vector<SiteSet> big_a(np), big_b(np), sub_a(np), sub_b(np);
    for (size_t i = 0; i < np; ++i) {
        big_a[i] = singleton(box, pairs[i].first);
        big_b[i] = singleton(box, pairs[i].second);
        sub_a[i] = singleton(subbox, pairs[i].first);
        sub_b[i] = singleton(subbox, pairs[i].second);
    }

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Hamiltonian ht = apply_perturbation(cfg, h, cfg.perturbation_strength);
        Hamiltonian hs = restrict_dirichlet(ht, subbox);
        Eigen::MatrixXd f_big = apply_function_spectral(eig(ht), f, cfg.eig_tol);
        Eigen::MatrixXd f_sub = apply_function_spectral(eig(hs), f, cfg.eig_tol);
        std::vector<double> row(np);
        for (size_t i = 0; i < np; ++i) {
            Eigen::MatrixXd d = select_block(f_sub, sub_a[i], sub_b[i]) -
                                select_block(f_big, big_a[i], big_b[i]);
            row[i] = schatten_norm(d, p);
        }
        return row;
    });

    std::vector<ScanPoint> points;
    for (size_t i = 0; i < np; ++i) {
        int dist = boundary_distance(box, big_a[i], subbox) +
                   boundary_distance(box, big_b[i], subbox);
        points.push_back(make_point(dist, summarize("boundary", column(rows, i), cfg.seed)));
    }
    sort_points(points);
    return fit_exponential_decay(std::move(points));
}

DecayFit convergence_scan(ConvergenceKind kind, const ModelConfig& cfg, const BVFunction& f,
                          double E, double p, const std::vector<int>& l_list, long n) {
    if (l_list.size() < 3)
        throw PreconditionError("volume convergence needs at least 3 box sizes");
    for (size_t i = 0; i + 1 < l_list.size(); ++i)
        if (l_list[i] >= l_list[i + 1])
            throw PreconditionError("box sizes must be strictly ascending");
    if (kind == ConvergenceKind::kernel_volume && !(p > 0.0))
        throw PreconditionError("the Schatten exponent must be positive");
    std::vector<ModelConfig> cfgs;
    for (int l : l_list) {
        cfgs.push_back(with_side(cfg, l));
        validate(cfgs.back());
    }

    size_t nl = l_list.size();
    const ModelConfig& proxy_cfg = cfgs.back();
    Box proxy_box = proxy_cfg.box();

    // Common-site index maps of every box into the proxy box.
    std::vector<std::vector<long>> into_proxy(nl - 1);
    for (size_t il = 0; il + 1 < nl; ++il) {
        Box small = cfgs[il].box();
        into_proxy[il].resize(static_cast<size_t>(small.size()));
        for (long i = 0; i < small.size(); ++i)
            into_proxy[il][static_cast<size_t>(i)] = proxy_box.index(small.coord(i));
    }

    auto rows = parallel_rows(n, [&](long r) {
        // The counter RNG keys disorder by absolute coordinate, so nested
        // boxes of one realization share their couplings.
        Hamiltonian hp = build_hamiltonian(proxy_cfg, sample_realization(proxy_cfg, r));
        Hamiltonian hpt = apply_perturbation(proxy_cfg, hp, proxy_cfg.perturbation_strength);
        Eigen::MatrixXd kernel_p;
        long xi_p = 0;
        double s_p = 0.0;
        if (kind == ConvergenceKind::kernel_volume) {
            kernel_p = apply_function_spectral(eig(hp), f, cfg.eig_tol) -
                       apply_function_spectral(eig(hpt), f, cfg.eig_tol);
        } else {
            auto sd = eig(hp), sdt = eig(hpt);
            xi_p = ssf_counting(sd, sdt, E, cfg.eig_tol);
            s_p = ground_state_overlap(sd, sdt, E, cfg.eig_tol, k_zero_threshold).value;
        }

        std::vector<double> row(nl - 1);
        for (size_t il = 0; il + 1 < nl; ++il) {
            Hamiltonian h = build_hamiltonian(cfgs[il], sample_realization(cfgs[il], r));
            Hamiltonian ht = apply_perturbation(cfgs[il], h, cfgs[il].perturbation_strength);
            if (kind == ConvergenceKind::kernel_volume) {
                Eigen::MatrixXd k = apply_function_spectral(eig(h), f, cfg.eig_tol) -
                                    apply_function_spectral(eig(ht), f, cfg.eig_tol);
                row[il] = schatten_norm(
                    Eigen::MatrixXd(k - select_block(kernel_p, into_proxy[il], into_proxy[il])),
                    p);
            } else if (kind == ConvergenceKind::ssf_volume) {
                row[il] = std::abs(static_cast<double>(
                    ssf_counting(eig(h), eig(ht), E, cfg.eig_tol) - xi_p));
            } else {
                row[il] = std::abs(
                    ground_state_overlap(eig(h), eig(ht), E, cfg.eig_tol, k_zero_threshold).value -
                    s_p);
            }
        }
        return row;
    });

    std::vector<ScanPoint> points;
    for (size_t il = 0; il + 1 < nl; ++il)
        points.push_back(
            make_point(l_list[il], summarize("convergence", column(rows, il), cfg.seed)));
    ScanPoint proxy_point;
    proxy_point.abscissa = l_list.back();
    proxy_point.n = n;
    proxy_point.excluded = true;
    points.push_back(proxy_point);
    auto fit = fit_exponential_decay(std::move(points));
    fit.note = "discrepancies are measured against the largest box";
    return fit;
}

HoelderReport hoelder_scan(const ModelConfig& cfg, const std::vector<double>& e_grid,
                           const std::vector<double>& alphas, long n) {
    validate(cfg);
    if (e_grid.size() < 2) throw PreconditionError("the modulus needs at least two energies");
    for (size_t i = 0; i + 1 < e_grid.size(); ++i)
        if (!(e_grid[i] < e_grid[i + 1]))
            throw PreconditionError("the energy grid must be strictly ascending");

    size_t ng = e_grid.size();
    std::vector<std::pair<size_t, size_t>> idx;
    for (size_t i = 0; i < ng; ++i)
        for (size_t j = i + 1; j < ng; ++j) idx.push_back({i, j});

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Hamiltonian ht = apply_perturbation(cfg, h, cfg.perturbation_strength);
        auto sd = eig(h), sdt = eig(ht);
        std::vector<Eigen::MatrixXd> t(ng);
        for (size_t i = 0; i < ng; ++i)
            t[i] = fermi_projection(sd, e_grid[i]) - fermi_projection(sdt, e_grid[i]);
        std::vector<double> row(idx.size());
        for (size_t k = 0; k < idx.size(); ++k)
            row[k] = trace_norm_symmetric(t[idx[k].first] - t[idx[k].second]);
        return row;
    });

    HoelderReport rep;
    rep.alphas = alphas;
    for (size_t k = 0; k < idx.size(); ++k) {
        auto r = summarize("hoelder", column(rows, k), cfg.seed);
        rep.points.push_back(make_point(e_grid[idx[k].second] - e_grid[idx[k].first], r));
    }
    sort_points(rep.points);

    std::vector<double> lx, ly;
    for (const auto& p : rep.points)
        if (p.mean > 0.0 && p.mean >= 3.0 * p.std_error) {
            lx.push_back(std::log(p.abscissa));
            ly.push_back(std::log(p.mean));
        }
    if (lx.size() < 3) {
        rep.note = lx.empty() ? "modulus identically zero or below the noise floor"
                              : "fewer than 3 points above the noise floor";
        return rep;
    }
    double m = static_cast<double>(lx.size());
    double xb = pairwise_sum(lx) / m, yb = pairwise_sum(ly) / m;
    double sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - xb) * (lx[k] - xb);
        sxy += (lx[k] - xb) * (ly[k] - yb);
    }
    rep.exponent = sxy / sxx;
    rep.log_c = yb - rep.exponent * xb;
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t k = 0; k < lx.size(); ++k) {
        double fy = rep.log_c + rep.exponent * lx[k];
        ss_res += (ly[k] - fy) * (ly[k] - fy);
        ss_tot += (ly[k] - yb) * (ly[k] - yb);
    }
    rep.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    rep.exponent_se = lx.size() > 2 ? std::sqrt(ss_res / (m - 2.0) / sxx) : 0.0;
    rep.fitted = true;

    for (double alpha : alphas) {
        double c = 0.0;
        for (const auto& p : rep.points)
            if (p.mean > 0.0) c = std::max(c, p.mean / std::pow(p.abscissa, alpha));
        rep.c_alpha.push_back(c);
        rep.alpha_holds.push_back(rep.exponent - 2.0 * rep.exponent_se >= alpha);
    }
    return rep;
}

AoProbability ao_probability(const ModelConfig& cfg, double E, long n, double zero_threshold,
                             double kernel_tol) {
    validate(cfg);
    if (!(kernel_tol > 0.0)) throw PreconditionError("kernel_tol must be positive");

    bool nonneg = true, nonpos = true, nonzero = false;
    for (const auto& [c, v] : cfg.perturbation.entries) {
        nonneg = nonneg && v >= 0.0;
        nonpos = nonpos && v <= 0.0;
        nonzero = nonzero || v != 0.0;
    }
    AoProbability rep;
    rep.tau = cfg.perturbation_strength;
    rep.sign_definite = nonzero && (nonneg || nonpos);

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Hamiltonian ht = apply_perturbation(cfg, h, cfg.perturbation_strength);
        ShiftOperator t = shift_operator(eig(h), eig(ht), E, cfg.eig_tol);
        auto proxy = infinite_volume_overlap_proxy(t, kernel_tol, zero_threshold);
        long theta = index_of_pair(t, kernel_tol).theta;
        return std::vector<double>{t.degenerate ? 1.0 : 0.0, theta != 0 ? 1.0 : 0.0,
                                   proxy.zero_flag ? 1.0 : 0.0, proxy.value};
    });

    long idx_hits = 0, zero_hits = 0;
    std::vector<double> s_values;
    for (const auto& row : rows) {
        if (row[0] != 0.0) {
            ++rep.degenerate_skipped;
            continue;
        }
        idx_hits += row[1] != 0.0;
        zero_hits += row[2] != 0.0;
        s_values.push_back(row[3]);
    }
    rep.n_used = static_cast<long>(s_values.size());
    if (rep.n_used == 0) throw NumericError("every realization was degenerate at this energy");
    rep.s_mean = summarize("overlap", s_values, cfg.seed);
    rep.p_index = wilson_interval(idx_hits, rep.n_used);
    rep.p_zero = wilson_interval(zero_hits, rep.n_used);
    rep.diff = std::abs(rep.p_index.p_hat - rep.p_zero.p_hat);
    double nn = static_cast<double>(rep.n_used);
    rep.diff_se = std::sqrt(rep.p_index.p_hat * (1.0 - rep.p_index.p_hat) / nn +
                            rep.p_zero.p_hat * (1.0 - rep.p_zero.p_hat) / nn);
    rep.agree = rep.diff <= normal_quantile(0.95) * rep.diff_se + 1e-12;
    return rep;
}

WegnerReport wegner_check(const ModelConfig& cfg, double center,
                          const std::vector<double>& lengths, long n) {
    validate(cfg);
    if (lengths.empty()) throw PreconditionError("the interval-length list must be nonempty");
    for (double l : lengths)
        if (!(l >= 0.0)) throw PreconditionError("interval lengths must be nonnegative");

    WegnerReport rep;
    rep.applicable = cfg.coupling > 0.0 && cfg.single_site_law.hi > cfg.single_site_law.lo;
    if (!rep.applicable) rep.note = "no-disorder regime, Wegner not applicable";

    size_t nl = lengths.size();
    auto count_in = [&](const Eigen::VectorXd& lam, double len) {
        double lo = center - 0.5 * len, hi = center + 0.5 * len;
        long c = 0;
        for (long i = 0; i < lam.size(); ++i) c += lam[i] >= lo && lam[i] <= hi;
        return static_cast<double>(c);
    };

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
        std::vector<double> row(nl);
        for (size_t i = 0; i < nl; ++i) row[i] = count_in(es.eigenvalues(), lengths[i]);
        return row;
    });

    for (size_t i = 0; i < nl; ++i)
        rep.by_interval.push_back(
            make_point(lengths[i], summarize("wegner", column(rows, i), cfg.seed)));
    sort_points(rep.by_interval);

    rep.linear_in_interval = rep.applicable;
    bool have_ratio = false;
    for (size_t i = 0; i < nl; ++i) {
        const auto& a = rep.by_interval[i];
        if (a.abscissa <= 0.0) continue;
        double ra = a.mean / a.abscissa;
        if (!have_ratio) {
            rep.ratio_min = rep.ratio_max = ra;
            have_ratio = true;
        }
        rep.ratio_min = std::min(rep.ratio_min, ra);
        rep.ratio_max = std::max(rep.ratio_max, ra);
        for (size_t j = i + 1; j < nl; ++j) {
            const auto& b = rep.by_interval[j];
            if (b.abscissa <= 0.0) continue;
            double rb = b.mean / b.abscissa;
            double se = std::sqrt(std::pow(a.std_error / a.abscissa, 2) +
                                  std::pow(b.std_error / b.abscissa, 2));
            if (std::abs(ra - rb) > 3.0 * se) rep.linear_in_interval = false;
        }
    }

    double ref_len = *std::max_element(lengths.begin(), lengths.end());
    ModelConfig doubled = with_side(cfg, 2 * cfg.sites_per_side);
    auto rows2 = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(doubled, sample_realization(doubled, r));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
        return std::vector<double>{count_in(es.eigenvalues(), ref_len)};
    });
    for (size_t i = 0; i < nl; ++i)
        if (lengths[i] == ref_len) rep.base_count = summarize("wegner", column(rows, i), cfg.seed);
    rep.doubled_count = summarize("wegner", column(rows2, 0), cfg.seed);

    double factor = std::pow(2.0, cfg.dimension);
    double se = std::sqrt(std::pow(rep.doubled_count.std_error, 2) +
                          std::pow(factor * rep.base_count.std_error, 2));
    rep.linear_in_volume =
        rep.applicable &&
        std::abs(rep.doubled_count.mean - factor * rep.base_count.mean) <= 3.0 * se;
    return rep;
}

DecayFit combes_thomas_check(const ModelConfig& cfg, double E,
                             const std::vector<std::pair<Coord, Coord>>& pairs, long n) {
    validate(cfg);
    Box box = cfg.box();
    require_pairs(pairs, box);

    size_t np = pairs.size();
    std::vector<SiteSet> sa(np), sb(np);
    for (size_t i = 0; i < np; ++i) {
        sa[i] = singleton(box, pairs[i].first);
        sb[i] = singleton(box, pairs[i].second);
    }

    {
        Hamiltonian probe = build_hamiltonian(cfg, sample_realization(cfg, 0));
        if (!(E <= probe.spectral_floor - 0.5))
            throw PreconditionError("the energy must stay at least 1/2 below the spectral floor");
    }

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Hamiltonian ht = apply_perturbation(cfg, h, cfg.perturbation_strength);
        ResolventFactor rf(ht, {E, 0.0});
        std::vector<double> row(np);
        for (size_t i = 0; i < np; ++i) row[i] = operator_norm(rf.block(sa[i], sb[i]));
        return row;
    });

    std::vector<ScanPoint> points;
    for (size_t i = 0; i < np; ++i) {
        double worst = 0.0;
        for (const auto& row : rows) worst = std::max(worst, row[i]);
        ScanPoint p;
        int dist = sup_distance(pairs[i].first, pairs[i].second);
        p.abscissa = dist;
        p.mean = worst;
        p.n = n;
        p.excluded = dist == 0;
        points.push_back(p);
    }
    sort_points(points);
    auto fit = fit_exponential_decay(std::move(points));
    if (fit.note.empty()) fit.note = "ordinate is the pathwise maximum, not a mean";
    return fit;
}

std::vector<ScanPoint> ids_estimate(const ModelConfig& cfg, const std::vector<double>& e_grid,
                                    long n) {
    validate(cfg);
    if (e_grid.empty()) throw PreconditionError("the energy grid must be nonempty");
    double volume = static_cast<double>(cfg.box().size());

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
        std::vector<double> row(e_grid.size());
        for (size_t i = 0; i < e_grid.size(); ++i) {
            long c = 0;
            for (long j = 0; j < es.eigenvalues().size(); ++j)
                c += es.eigenvalues()[j] <= e_grid[i];
            row[i] = static_cast<double>(c) / volume;
        }
        return row;
    });

    std::vector<ScanPoint> points;
    for (size_t i = 0; i < e_grid.size(); ++i)
        points.push_back(make_point(e_grid[i], summarize("ids", column(rows, i), cfg.seed)));
    return points;
}

SsfPositivityReport ssf_positivity_scan(const ModelConfig& cfg, const std::vector<double>& e_grid,
                                        double dos_halfwidth, long n) {
    validate(cfg);
    if (e_grid.empty()) throw PreconditionError("the energy grid must be nonempty");
    if (!(dos_halfwidth > 0.0)) throw PreconditionError("dos_halfwidth must be positive");
    if (!(cfg.coupling > 0.0) || !(cfg.single_site_law.hi > cfg.single_site_law.lo))
        throw PreconditionError("the positivity hypothesis needs a non-degenerate coupling law");
    bool dominates = false;
    for (const auto& [c, v] : cfg.perturbation.entries) {
        if (v < 0.0)
            throw PreconditionError("the positivity hypothesis needs a nonnegative perturbation");
        double u = cfg.bump_profile.empty() ? (c == Coord{0, 0} ? 1.0 : 0.0)
                                            : cfg.bump_profile.value_at(c);
        dominates = dominates || (v > 0.0 && u > 0.0);
    }
    if (!dominates)
        throw PreconditionError(
            "the perturbation must dominate the single-site profile somewhere");

    size_t ng = e_grid.size();
    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        Hamiltonian ht = apply_perturbation(cfg, h, cfg.perturbation_strength);
        auto sd = eig(h), sdt = eig(ht);
        std::vector<double> row(2 * ng + 1, 0.0);
        for (size_t i = 0; i < ng; ++i) {
            long xi = ssf_counting(sd, sdt, e_grid[i], cfg.eig_tol);
            row[i] = static_cast<double>(xi);
            if (xi < 0) row[2 * ng] += 1.0;
            row[ng + i] = static_cast<double>(
                counting_function(sd, e_grid[i] + dos_halfwidth, cfg.eig_tol) -
                counting_function(sd, e_grid[i] - dos_halfwidth, cfg.eig_tol));
        }
        return row;
    });

    SsfPositivityReport rep;
    double volume = static_cast<double>(cfg.box().size());
    for (size_t i = 0; i < ng; ++i) {
        SsfPositivityPoint pt;
        pt.energy = e_grid[i];
        pt.xi = summarize("xi", column(rows, i), cfg.seed);
        auto window = summarize("window-count", column(rows, ng + i), cfg.seed);
        pt.dos = window.mean / (2.0 * dos_halfwidth * volume);
        pt.positive = pt.xi.ci_lo > 0.0 && pt.dos > 0.0;
        rep.points.push_back(pt);
    }
    rep.negative_xi_samples =
        static_cast<long>(std::llround(pairwise_sum(column(rows, 2 * ng))));
    return rep;
}

UcpReport ucp_positivity_check(const ModelConfig& cfg, const SiteSet& gamma, const BVFunction& f,
                               double E, long n) {
    validate(cfg);
    Box box = cfg.box();
    if (gamma.empty()) throw PreconditionError("the site set must be nonempty");
    for (long i : gamma)
        if (i < 0 || i >= box.size())
            throw PreconditionError("the site set leaves the configured box");
    if (f.right_value != 0.0 || f.breaks.back() > E)
        throw PreconditionError("the function must be supported below the energy");
    for (int k = 0; k <= 2000; ++k) {
        double span = f.breaks.back() - f.breaks.front() + 2.0;
        double x = f.breaks.front() - 1.0 + span * k / 2000.0;
        if (f(x) < -1e-12) throw PreconditionError("the function must be nonnegative");
    }
    if (f.left_value < 0.0) throw PreconditionError("the function must be nonnegative");

    auto rows = parallel_rows(n, [&](long r) {
        Hamiltonian h = build_hamiltonian(cfg, sample_realization(cfg, r));
        auto sd = eig(h);
        Eigen::MatrixXd fm = apply_function_spectral(sd, f, cfg.eig_tol);
        double local = 0.0;
        for (long i : gamma) local += fm(i, i);
        double full = 0.0;
        for (long i = 0; i < sd.eigenvalues.size(); ++i) full += f(sd.eigenvalues[i]);
        return std::vector<double>{local, full};
    });

    UcpReport rep;
    rep.gamma_trace = summarize("localized-trace", column(rows, 0), cfg.seed);
    rep.full_trace = summarize("full-trace", column(rows, 1), cfg.seed);
    rep.dos_weighted = rep.full_trace.mean / static_cast<double>(box.size());
    rep.dos_positive = rep.dos_weighted > 0.0;
    rep.trace_positive = rep.gamma_trace.ci_lo > 0.0;
    rep.consistent = !rep.dos_positive || rep.trace_positive;
    return rep;
}

}  // namespace andersonlab
