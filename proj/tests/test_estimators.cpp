#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "andersonlab/errors.hpp"
#include "andersonlab/estimators.hpp"
#include "doctest.h"

using namespace andersonlab;

namespace {

struct EnvGuard {
    std::string name, old_value;
    bool had;
    EnvGuard(const char* n, const char* v) : name(n) {
        const char* cur = std::getenv(n);
        had = cur != nullptr;
        if (had) old_value = cur;
        if (v)
            setenv(n, v, 1);
        else
            unsetenv(n);
    }
    ~EnvGuard() {
        if (had)
            setenv(name.c_str(), old_value.c_str(), 1);
        else
            unsetenv(name.c_str());
    }
};

ModelConfig line_config(int sites, double coupling, double tau) {
    ModelConfig cfg;
    cfg.dimension = 1;
    cfg.sites_per_side = sites;
    cfg.lattice_spacing = 1.0;
    cfg.coupling = coupling;
    cfg.perturbation_strength = tau;
    cfg.perturbation.entries = {{Coord{0, 0}, 1.0}};
    cfg.single_site_law = {0.0, 1.0};
    cfg.seed = 20260814;
    return cfg;
}

std::vector<std::pair<Coord, Coord>> origin_pairs(int max_x) {
    std::vector<std::pair<Coord, Coord>> pairs;
    for (int x = 1; x <= max_x; ++x) pairs.push_back({Coord{0, 0}, Coord{x, 0}});
    return pairs;
}

}  // namespace

TEST_CASE("pairwise sum matches sequential accumulation") {
    CHECK(pairwise_sum({}) == 0.0);
    std::vector<double> v(1000);
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
    CHECK(pairwise_sum(v) == 500500.0);
    std::vector<double> r(257);
    for (size_t i = 0; i < r.size(); ++i) r[i] = std::sin(0.37 * static_cast<double>(i));
    double seq = std::accumulate(r.begin(), r.end(), 0.0);
    CHECK(pairwise_sum(r) == doctest::Approx(seq).epsilon(1e-12));
}

TEST_CASE("normal quantile hits tabulated two-sided points") {
    CHECK(normal_quantile(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.99) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
    // erf(1/sqrt 2) is the one-sigma coverage, so the quantile is exactly 1
    CHECK(normal_quantile(0.6826894921370859) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), PreconditionError);
    CHECK_THROWS_AS(normal_quantile(1.0), PreconditionError);
}

TEST_CASE("summary of a small sample") {
    auto r = summarize("toy", {1.0, 2.0, 3.0, 4.0}, 7);
    CHECK(r.mean == 2.5);
    CHECK(r.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-14));
    CHECK(r.ci_lo == doctest::Approx(2.5 - 1.959963984540054 * r.std_error).epsilon(1e-12));
    CHECK(r.ci_hi == doctest::Approx(2.5 + 1.959963984540054 * r.std_error).epsilon(1e-12));
    CHECK(r.n == 4);
    CHECK(r.seed == 7);

    auto c = summarize("const", std::vector<double>(37, 3.25), 0);
    CHECK(c.mean == 3.25);
    CHECK(c.std_error == 0.0);
    CHECK(c.ci_lo == 3.25);
    CHECK(c.ci_hi == 3.25);

    auto one = summarize("one", {5.0}, 0);
    CHECK(one.std_error == 0.0);
    CHECK_THROWS_AS(summarize("empty", {}, 0), PreconditionError);
    CHECK_THROWS_AS(summarize("nan", {0.0, NAN}, 0), NumericError);
}

TEST_CASE("wilson interval endpoints solve the defining equation") {
    auto w = wilson_interval(50, 100);
    CHECK(w.p_hat == 0.5);
    CHECK(w.lo == doctest::Approx(0.4038315).epsilon(1e-5));
    CHECK(w.hi == doctest::Approx(0.5961685).epsilon(1e-5));
    // each endpoint p satisfies (p_hat - p)^2 = z^2 p(1-p)/n
    double z = normal_quantile(0.95);
    for (double p : {w.lo, w.hi}) {
        double lhs = (w.p_hat - p) * (w.p_hat - p);
        double rhs = z * z * p * (1.0 - p) / 100.0;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    CHECK(wilson_interval(0, 20).lo == 0.0);
    CHECK(wilson_interval(20, 20).hi == 1.0);
    CHECK(wilson_interval(0, 20).hi > 0.0);  // never collapses to a point
    CHECK_THROWS_AS(wilson_interval(5, 0), PreconditionError);
    CHECK_THROWS_AS(wilson_interval(-1, 10), PreconditionError);
    CHECK_THROWS_AS(wilson_interval(11, 10), PreconditionError);
}

TEST_CASE("worker count respects the thread cap") {
    {
        EnvGuard g("ANDERSON_LAB_THREADS", "3");
        CHECK(worker_count(10) == 3);
        CHECK(worker_count(2) == 2);
        CHECK(worker_count(0) == 1);
    }
    {
        EnvGuard g("ANDERSON_LAB_THREADS", "0");
        CHECK(worker_count(10) == 1);
    }
    {
        EnvGuard g("ANDERSON_LAB_THREADS", nullptr);
        int w = worker_count(10);
        CHECK(w >= 1);
        CHECK(w <= 10);
    }
}

TEST_CASE("parallel rows are slot-indexed and propagate failures") {
    EnvGuard g("ANDERSON_LAB_THREADS", "4");
    auto rows = parallel_rows(100, [](long i) {
        return std::vector<double>{static_cast<double>(i * i), static_cast<double>(-i)};
    });
    REQUIRE(rows.size() == 100);
    for (long i = 0; i < 100; ++i) {
        CHECK(rows[i][0] == static_cast<double>(i * i));
        CHECK(rows[i][1] == static_cast<double>(-i));
    }
    CHECK_THROWS_AS(parallel_rows(0, [](long) { return std::vector<double>{}; }),
                    PreconditionError);

    auto failing = [](long i) -> std::vector<double> {
        if (i >= 5) throw PreconditionError("boom");
        return {0.0};
    };
    try {
        parallel_rows(20, failing);
        FAIL("expected the row refusal to propagate");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("realization 5") != std::string::npos);
        CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }

    auto blowing_up = [](long i) -> std::vector<double> {
        if (i == 3) throw NumericError("overflow");
        return {0.0};
    };
    CHECK_THROWS_AS(parallel_rows(8, blowing_up), NumericError);
}

TEST_CASE("monte carlo expectation is exact on constants and unbiased on the couplings") {
    ModelConfig cfg = line_config(9, 1.0, 0.0);
    auto constant = mc_expectation(
        "constant", [](const ModelConfig&, const DisorderRealization&) { return 3.25; }, cfg, 64);
    CHECK(constant.mean == 3.25);
    CHECK(constant.std_error == 0.0);

    long origin = cfg.box().index(Coord{0, 0});
    auto omega = mc_expectation(
        "origin-coupling",
        [origin](const ModelConfig&, const DisorderRealization& r) {
            return r.omega[static_cast<size_t>(origin)];
        },
        cfg, 4000);
    CHECK(std::abs(omega.mean - 0.5) <= 5.0 * omega.std_error);
    CHECK(omega.std_error > 0.003);
    CHECK(omega.std_error < 0.006);
    CHECK(omega.ci_lo < omega.mean);
    CHECK(omega.ci_hi > omega.mean);

    CHECK_THROWS_AS(mc_expectation(
                        "none", [](const ModelConfig&, const DisorderRealization&) { return 0.0; },
                        cfg, 0),
                    PreconditionError);
    try {
        mc_expectation(
            "angry",
            [](const ModelConfig&, const DisorderRealization&) -> double {
                throw NumericError("exploded");
            },
            cfg, 4);
        FAIL("expected a NumericError");
    } catch (const NumericError& e) {
        std::string msg = e.what();
        CHECK(msg.find("angry") != std::string::npos);
        CHECK(msg.find("seed") != std::string::npos);
        CHECK(msg.find("realization 0") != std::string::npos);
    }
}

TEST_CASE("estimates do not depend on the worker count") {
    ModelConfig cfg = line_config(11, 2.0, 0.0);
    auto stat = [](const ModelConfig& c, const DisorderRealization& r) {
        Hamiltonian h = build_hamiltonian(c, r);
        return h.matrix.trace();
    };
    EstimatorResult serial, threaded;
    {
        EnvGuard g("ANDERSON_LAB_THREADS", "1");
        serial = mc_expectation("trace", stat, cfg, 200);
    }
    {
        EnvGuard g("ANDERSON_LAB_THREADS", "4");
        threaded = mc_expectation("trace", stat, cfg, 200);
    }
    CHECK(serial.mean == threaded.mean);
    CHECK(serial.std_error == threaded.std_error);
    CHECK(serial.ci_lo == threaded.ci_lo);
}

TEST_CASE("exponential fit recovers a synthetic decay") {
    std::vector<ScanPoint> pts;
    for (int d = 1; d <= 6; ++d) {
        ScanPoint p;
        p.abscissa = d;
        p.mean = 2.0 * std::exp(-0.7 * d);
        p.std_error = 1e-8 * p.mean;
        p.n = 100;
        pts.push_back(p);
    }
    auto fit = fit_exponential_decay(pts);
    REQUIRE(fit.fitted);
    CHECK(fit.mu == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(fit.log_c == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.fit_points == 6);
}

TEST_CASE("exponential fit applies the noise floor and the degeneracy guards") {
    std::vector<ScanPoint> pts;
    for (int d = 1; d <= 4; ++d) {
        ScanPoint p;
        p.abscissa = d;
        p.mean = std::exp(-0.5 * d);
        p.std_error = 1e-6;
        p.n = 50;
        pts.push_back(p);
    }
    ScanPoint noise;  // below the 3 sigma floor
    noise.abscissa = 12.0;
    noise.mean = 1e-9;
    noise.std_error = 1e-9;
    noise.n = 50;
    pts.push_back(noise);
    ScanPoint negative;
    negative.abscissa = 13.0;
    negative.mean = -0.2;
    negative.std_error = 1e-6;
    negative.n = 50;
    pts.push_back(negative);
    ScanPoint input_excluded;
    input_excluded.abscissa = 0.0;
    input_excluded.mean = 5.0;
    input_excluded.std_error = 1e-6;
    input_excluded.n = 50;
    input_excluded.excluded = true;
    pts.push_back(input_excluded);

    auto fit = fit_exponential_decay(pts);
    REQUIRE(fit.fitted);
    CHECK(fit.fit_points == 4);
    CHECK(fit.mu == doctest::Approx(0.5).epsilon(1e-6));
    for (const auto& p : fit.points)
        if (p.abscissa >= 12.0 || p.abscissa == 0.0) CHECK(p.excluded);

    std::vector<ScanPoint> zeros(3);
    for (int i = 0; i < 3; ++i) zeros[i].abscissa = i + 1;
    auto zfit = fit_exponential_decay(zeros);
    CHECK(zfit.identically_zero);
    CHECK_FALSE(zfit.fitted);

    auto few = fit_exponential_decay({pts[0], pts[1]});
    CHECK_FALSE(few.fitted);
    CHECK(few.note.find("fewer than 3") != std::string::npos);

    std::vector<ScanPoint> flat(3, pts[0]);
    auto ffit = fit_exponential_decay(flat);
    CHECK_FALSE(ffit.fitted);
    CHECK(ffit.note.find("degenerate abscissa") != std::string::npos);
}

TEST_CASE("fractional moment scan decays at strong coupling") {
    ModelConfig cfg = line_config(25, 8.0, 0.0);
    auto pairs = origin_pairs(8);
    pairs.push_back({Coord{0, 0}, Coord{0, 0}});  // zero distance, tabulated but not fitted
    auto fit = fmb_scan(cfg, 1.0, {0.5, 1.0}, 0.5, pairs, 40);
    REQUIRE(fit.fitted);
    CHECK(fit.mu > 0.05);
    CHECK(fit.points.front().abscissa == 0.0);
    CHECK(fit.points.front().excluded);
    for (const auto& p : fit.points) CHECK(p.mean > 0.0);
    CHECK(fit.note.find("eta") != std::string::npos);

    CHECK_THROWS_AS(fmb_scan(cfg, 1.0, {0.5}, 1.5, pairs, 4), PreconditionError);
    CHECK_THROWS_AS(fmb_scan(cfg, 1.0, {-0.5}, 0.5, pairs, 4), PreconditionError);
    CHECK_THROWS_AS(fmb_scan(cfg, 1.0, {}, 0.5, pairs, 4), PreconditionError);
    CHECK_THROWS_AS(fmb_scan(cfg, 1.0, {0.5}, 0.5, {}, 4), PreconditionError);
    CHECK_THROWS_AS(fmb_scan(cfg, 1.0, {0.5}, 0.5, {{Coord{0, 0}, Coord{99, 0}}}, 4),
                    PreconditionError);
}

TEST_CASE("kernel scan vanishes identically without a perturbation") {
    ModelConfig cfg = line_config(15, 2.0, 0.0);
    auto fit = kernel_decay_scan(cfg, indicator(2.0), 2.0, origin_pairs(4), 10);
    CHECK(fit.identically_zero);
    CHECK_FALSE(fit.fitted);
    for (const auto& p : fit.points) CHECK(p.mean == 0.0);
}

TEST_CASE("kernel scan decays away from a localized perturbation") {
    ModelConfig cfg = line_config(21, 6.0, 1.0);
    cfg.perturbation.entries = {{Coord{0, 0}, 2.0}};
    auto fit = kernel_decay_scan(cfg, indicator(2.5), 2.0, origin_pairs(7), 40);
    REQUIRE(fit.fitted);
    CHECK(fit.mu > 0.05);
    CHECK(fit.r2 > 0.5);
    CHECK_THROWS_AS(kernel_decay_scan(cfg, indicator(2.5), 0.0, origin_pairs(3), 4),
                    PreconditionError);
}

TEST_CASE("boundary scan decays into the bulk") {
    ModelConfig cfg = line_config(21, 6.0, 1.0);
    cfg.perturbation.entries = {{Coord{0, 0}, 2.0}};
    Box sub = Box::centered(1, 13);
    std::vector<std::pair<Coord, Coord>> pairs;
    for (int x = 0; x <= 5; ++x) pairs.push_back({Coord{x, 0}, Coord{x, 0}});
    auto fit = boundary_decay_scan(cfg, indicator(2.5), 2.0, sub, pairs, 400);
    REQUIRE(fit.fitted);
    CHECK(fit.mu > 0.05);
    // site x sits 7 - x steps from the complement of the sub-box
    CHECK(fit.points.back().abscissa == 14.0);
    CHECK(fit.points.front().abscissa == 4.0);

    CHECK_THROWS_AS(boundary_decay_scan(cfg, indicator(2.5), 2.0, cfg.box(), pairs, 4),
                    PreconditionError);
    CHECK_THROWS_AS(
        boundary_decay_scan(cfg, indicator(2.5), 2.0, sub, {{Coord{8, 0}, Coord{0, 0}}}, 4),
        PreconditionError);
}

TEST_CASE("volume convergence is exact for the counting discrepancy at tau zero") {
    ModelConfig cfg = line_config(9, 2.0, 0.0);
    auto fit = convergence_scan(ConvergenceKind::ssf_volume, cfg, indicator(2.0), 2.0, 2.0,
                                {9, 13, 17}, 12);
    CHECK(fit.identically_zero);
    REQUIRE(fit.points.size() == 3);
    CHECK(fit.points.back().excluded);  // the largest box is the proxy
    CHECK(fit.points.back().mean == 0.0);
    CHECK(fit.note.find("largest box") != std::string::npos);
}

TEST_CASE("volume convergence tabulates kernel and overlap discrepancies") {
    ModelConfig cfg = line_config(9, 4.0, 1.0);
    cfg.perturbation.entries = {{Coord{0, 0}, 1.5}};
    auto kernel = convergence_scan(ConvergenceKind::kernel_volume, cfg, indicator(2.5), 2.5, 2.0,
                                   {9, 13, 17, 21}, 30);
    REQUIRE(kernel.points.size() == 4);
    for (const auto& p : kernel.points) CHECK(p.mean >= 0.0);
    CHECK(kernel.points[0].abscissa == 9.0);
    CHECK(kernel.points[3].excluded);

    auto overlap = convergence_scan(ConvergenceKind::overlap_volume, cfg, indicator(2.5), 2.5, 2.0,
                                    {9, 13, 17}, 20);
    REQUIRE(overlap.points.size() == 3);
    for (const auto& p : overlap.points) CHECK(p.mean >= 0.0);

    CHECK_THROWS_AS(convergence_scan(ConvergenceKind::ssf_volume, cfg, indicator(2.5), 2.5, 2.0,
                                     {9, 13}, 4),
                    PreconditionError);
    CHECK_THROWS_AS(convergence_scan(ConvergenceKind::ssf_volume, cfg, indicator(2.5), 2.5, 2.0,
                                     {13, 9, 17}, 4),
                    PreconditionError);
}

TEST_CASE("hoelder modulus grows with the energy separation") {
    ModelConfig cfg = line_config(13, 1.0, 1.0);
    auto rep = hoelder_scan(cfg, {0.5, 1.0, 1.5, 2.0}, {0.2, 0.5}, 50);
    REQUIRE(rep.fitted);
    CHECK(rep.exponent > 0.0);
    CHECK(rep.r2 <= 1.0 + 1e-12);
    REQUIRE(rep.points.size() == 6);  // all grid pairs
    CHECK(rep.points.front().abscissa == 0.5);
    CHECK(rep.points.back().abscissa == 1.5);
    REQUIRE(rep.c_alpha.size() == 2);
    REQUIRE(rep.alpha_holds.size() == 2);
    for (double c : rep.c_alpha) CHECK(c > 0.0);

    ModelConfig frozen = line_config(13, 1.0, 0.0);
    auto zero = hoelder_scan(frozen, {0.5, 1.0, 1.5}, {0.2}, 8);
    CHECK_FALSE(zero.fitted);
    CHECK(zero.note.find("identically zero") != std::string::npos);

    CHECK_THROWS_AS(hoelder_scan(cfg, {1.0}, {0.2}, 4), PreconditionError);
    CHECK_THROWS_AS(hoelder_scan(cfg, {1.0, 0.5}, {0.2}, 4), PreconditionError);
}

TEST_CASE("index and vanishing-overlap frequencies agree for a sign-definite kick") {
    ModelConfig cfg = line_config(13, 1.0, 1.0);
    cfg.perturbation.entries = {{Coord{0, 0}, 2.0}};
    auto rep = ao_probability(cfg, 2.5, 250, 1e-300, 1e-6);
    CHECK(rep.sign_definite);
    CHECK(rep.tau == 1.0);
    CHECK(rep.n_used + rep.degenerate_skipped == 250);
    CHECK(rep.n_used > 0);
    CHECK(rep.agree);
    CHECK(rep.diff <= 0.05);
    CHECK(rep.s_mean.mean >= 0.0);
    CHECK(rep.s_mean.mean <= 1.0 + 1e-12);
    CHECK(rep.p_index.p_hat >= 0.0);
    CHECK(rep.p_index.p_hat <= 1.0);

    ModelConfig mixed = line_config(13, 1.0, 1.0);
    mixed.perturbation.entries = {{Coord{0, 0}, 1.0}, {Coord{1, 0}, -0.5}};
    auto mrep = ao_probability(mixed, 2.5, 10, 1e-300, 1e-6);
    CHECK_FALSE(mrep.sign_definite);

    CHECK_THROWS_AS(ao_probability(cfg, 2.5, 10, 1e-300, 0.0), PreconditionError);
}

TEST_CASE("eigenvalue counts scale with the interval and the volume") {
    // deep in the strong-coupling regime the averaged counting measure is
    // nearly flat mid-spectrum, so both linearity checks must come out true
    ModelConfig cfg = line_config(16, 10.0, 0.0);
    auto rep = wegner_check(cfg, 7.0, {0.8, 1.2}, 400);
    CHECK(rep.applicable);
    REQUIRE(rep.by_interval.size() == 2);
    CHECK(rep.by_interval[0].abscissa == 0.8);
    for (const auto& p : rep.by_interval) CHECK(p.mean > 0.0);
    CHECK(rep.ratio_min <= rep.ratio_max);
    CHECK(rep.ratio_min > 0.0);
    CHECK(rep.linear_in_interval);
    CHECK(rep.linear_in_volume);
    CHECK(rep.base_count.mean > 0.0);
    CHECK(rep.doubled_count.mean > rep.base_count.mean);

    ModelConfig frozen = line_config(16, 0.0, 0.0);
    auto none = wegner_check(frozen, 2.0, {0.5}, 4);
    CHECK_FALSE(none.applicable);
    CHECK(none.note.find("not applicable") != std::string::npos);

    CHECK_THROWS_AS(wegner_check(cfg, 2.0, {}, 4), PreconditionError);
    CHECK_THROWS_AS(wegner_check(cfg, 2.0, {-0.5}, 4), PreconditionError);
}

TEST_CASE("resolvent decay below the spectrum matches the free-lattice rate") {
    ModelConfig cfg = line_config(41, 0.0, 0.0);
    std::vector<std::pair<Coord, Coord>> pairs;
    for (int x = 2; x <= 10; ++x) pairs.push_back({Coord{0, 0}, Coord{x, 0}});
    auto fit = combes_thomas_check(cfg, -1.0, pairs, 2);
    REQUIRE(fit.fitted);
    // free 1d rate at E = -1: cosh mu = 3/2
    double mu = std::acosh(1.5);
    CHECK(std::abs(fit.mu - mu) / mu < 0.05);
    for (const auto& p : fit.points) CHECK(p.std_error == 0.0);  // pathwise maximum
    CHECK(fit.note.find("maximum") != std::string::npos);

    CHECK_THROWS_AS(combes_thomas_check(cfg, 1.0, pairs, 2), PreconditionError);
    CHECK_THROWS_AS(combes_thomas_check(cfg, -1.0, {}, 2), PreconditionError);
}

TEST_CASE("integrated density of states saturates across the band") {
    ModelConfig free_cfg = line_config(21, 0.0, 0.0);
    auto pts = ids_estimate(free_cfg, {-0.1, 2.0, 4.1}, 3);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].mean == 0.0);
    CHECK(pts[2].mean == 1.0);
    CHECK(pts[0].std_error == 0.0);
    CHECK(pts[1].mean > 0.0);
    CHECK(pts[1].mean < 1.0);

    ModelConfig cfg = line_config(15, 1.0, 0.0);
    auto dpts = ids_estimate(cfg, {0.5, 1.5, 2.5, 3.5}, 50);
    for (size_t i = 0; i + 1 < dpts.size(); ++i) CHECK(dpts[i].mean <= dpts[i + 1].mean);
    CHECK_THROWS_AS(ids_estimate(cfg, {}, 4), PreconditionError);
}

TEST_CASE("spectral shift stays nonnegative under a nonnegative kick") {
    ModelConfig cfg = line_config(15, 1.2, 1.0);
    cfg.perturbation.entries = {{Coord{0, 0}, 1.5}};
    auto rep = ssf_positivity_scan(cfg, {1.0, 2.0, 3.0}, 0.5, 300);
    REQUIRE(rep.points.size() == 3);
    CHECK(rep.negative_xi_samples == 0);
    for (const auto& p : rep.points) {
        CHECK(p.xi.mean >= 0.0);
        CHECK(p.dos > 0.0);
        CHECK(p.positive == (p.xi.ci_lo > 0.0 && p.dos > 0.0));
    }
    CHECK(rep.points[1].positive);

    ModelConfig negative = line_config(15, 1.2, 1.0);
    negative.perturbation.entries = {{Coord{0, 0}, -1.0}};
    CHECK_THROWS_AS(ssf_positivity_scan(negative, {2.0}, 0.5, 4), PreconditionError);

    ModelConfig disjoint = line_config(15, 1.2, 1.0);
    disjoint.perturbation.entries = {{Coord{1, 0}, 1.0}};  // misses the point profile at 0
    CHECK_THROWS_AS(ssf_positivity_scan(disjoint, {2.0}, 0.5, 4), PreconditionError);

    ModelConfig frozen = line_config(15, 0.0, 1.0);
    CHECK_THROWS_AS(ssf_positivity_scan(frozen, {2.0}, 0.5, 4), PreconditionError);
}

TEST_CASE("a localized trace stays positive where the density of states lives") {
    ModelConfig cfg = line_config(15, 0.5, 0.0);
    long origin = cfg.box().index(Coord{0, 0});
    auto rep = ucp_positivity_check(cfg, {origin}, bump(1.0, 0.5), 2.0, 200);
    CHECK(rep.dos_positive);
    CHECK(rep.trace_positive);
    CHECK(rep.consistent);
    CHECK(rep.gamma_trace.ci_lo > 0.0);
    CHECK(rep.full_trace.mean > rep.gamma_trace.mean);

    BVFunction zero;
    zero.breaks = {0.0, 1.0};
    zero.poly = {{0.0, 0.0, 0.0, 0.0}};
    zero.left_value = 0.0;
    zero.right_value = 0.0;
    auto zrep = ucp_positivity_check(cfg, {origin}, zero, 2.0, 8);
    CHECK(zrep.gamma_trace.mean == 0.0);
    CHECK_FALSE(zrep.dos_positive);
    CHECK(zrep.consistent);

    CHECK_THROWS_AS(ucp_positivity_check(cfg, {}, bump(1.0, 0.5), 2.0, 4), PreconditionError);
    CHECK_THROWS_AS(ucp_positivity_check(cfg, {9999}, bump(1.0, 0.5), 2.0, 4), PreconditionError);
    CHECK_THROWS_AS(ucp_positivity_check(cfg, {origin}, bump(1.0, 0.5), 1.0, 4),
                    PreconditionError);
    BVFunction dip;
    dip.breaks = {0.0, 1.0};
    dip.poly = {{-0.5, 0.0, 0.0, 0.0}};
    dip.left_value = 0.0;
    dip.right_value = 0.0;
    CHECK_THROWS_AS(ucp_positivity_check(cfg, {origin}, dip, 2.0, 4), PreconditionError);
}
