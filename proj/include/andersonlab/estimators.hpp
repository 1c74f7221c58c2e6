#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "andersonlab/funcalc.hpp"
#include "andersonlab/model.hpp"
#include "andersonlab/overlap.hpp"
#include "andersonlab/shift.hpp"

namespace andersonlab {

// Disorder average of a named statistic, with a normal-approximation
// confidence interval.
struct EstimatorResult {
    std::string statistic;
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long n = 0;
    uint64_t seed = 0;
};

// One abscissa of a scan. Points whose mean sits below three standard errors
// (or which a scan rules out, like zero distance) are excluded from fits.
struct ScanPoint {
    double abscissa = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    long n = 0;
    bool excluded = false;
};

// Exponential-decay fit log(mean) = log_c - mu * abscissa, weighted least
// squares with weights propagated from the relative standard errors.
struct DecayFit {
    std::vector<ScanPoint> points;
    double log_c = 0.0;
    double mu = 0.0;
    double r2 = 0.0;  // unweighted, on the log ordinates
    long fit_points = 0;
    bool fitted = false;
    bool identically_zero = false;
    std::string note;
};

DecayFit fit_exponential_decay(std::vector<ScanPoint> points);

// Two-sided normal quantile: P(|Z| <= z) = confidence.
double normal_quantile(double confidence);

// Fixed-shape pairwise tree; the summation order never depends on the
// thread count.
double pairwise_sum(const std::vector<double>& values);

EstimatorResult summarize(const std::string& statistic, const std::vector<double>& values,
                          uint64_t seed, double confidence = 0.95);

struct WilsonInterval {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    long successes = 0;
    long n = 0;
};

WilsonInterval wilson_interval(long successes, long n, double confidence = 0.95);

// Workers used for a job list: min(jobs, ANDERSON_LAB_THREADS or the hardware
// count). Never affects results, only wall time.
int worker_count(long jobs);

// Slot-indexed parallel evaluation of one row per realization; bit-identical
// for every worker count.
std::vector<std::vector<double>> parallel_rows(
    long n, const std::function<std::vector<double>(long)>& row_fn);

using Statistic = std::function<double(const ModelConfig&, const DisorderRealization&)>;

// Disorder average of a scalar statistic over realizations 0..n-1.
EstimatorResult mc_expectation(const std::string& name, const Statistic& statistic,
                               const ModelConfig& cfg, long n);

// max over the eta grid of E[ || chi_a (H - E - i eta)^{-1} chi_b ||^s ],
// fitted against the pair distance |a-b|; zero-distance pairs are tabulated
// but never fitted.
DecayFit fmb_scan(const ModelConfig& cfg, double E, const std::vector<double>& eta_grid, double s,
                  const std::vector<std::pair<Coord, Coord>>& pairs, long n);

// E[ || chi_a (f(H) - f(H^tau)) chi_b ||_p ] fitted against |a| + |b|.
DecayFit kernel_decay_scan(const ModelConfig& cfg, const BVFunction& f, double p,
                           const std::vector<std::pair<Coord, Coord>>& pairs, long n);

// E[ || chi_a (f(H^tau on subbox) - f(H^tau)) chi_b ||_p ] fitted against
// dist(a, boundary) + dist(b, boundary); the subbox needs one site of margin.
DecayFit boundary_decay_scan(const ModelConfig& cfg, const BVFunction& f, double p,
                             const Box& subbox, const std::vector<std::pair<Coord, Coord>>& pairs,
                             long n);

enum class ConvergenceKind { kernel_volume, ssf_volume, overlap_volume };

// Discrepancy against the largest box of the list (the proxy), disorder
// averaged per box size and fitted in L. kernel_volume compares
// f(H)-f(H^tau) on the common sites in Schatten-p; ssf_volume and
// overlap_volume compare the counting difference and the ground-state
// overlap at energy E.
DecayFit convergence_scan(ConvergenceKind kind, const ModelConfig& cfg, const BVFunction& f,
                          double E, double p, const std::vector<int>& l_list, long n);

// Empirical continuity modulus E[ || T(E) - T(E') ||_1 ] over grid pairs,
// log-log fitted; alpha_holds records whether the fitted exponent minus two
// standard errors still clears each requested alpha.
struct HoelderReport {
    std::vector<ScanPoint> points;  // abscissa = |E - E'|
    double exponent = 0.0;
    double exponent_se = 0.0;
    double log_c = 0.0;
    double r2 = 0.0;
    bool fitted = false;
    std::vector<double> alphas;
    std::vector<double> c_alpha;  // max of modulus / dE^alpha over the range
    std::vector<bool> alpha_holds;
    std::string note;
};

HoelderReport hoelder_scan(const ModelConfig& cfg, const std::vector<double>& e_grid,
                           const std::vector<double>& alphas, long n);

// P[theta != 0] against P[the shift-operator determinant vanishes], with
// Wilson intervals, plus E[S]. Degenerate energies are counted and skipped.
struct AoProbability {
    EstimatorResult s_mean;
    WilsonInterval p_index;
    WilsonInterval p_zero;
    double diff = 0.0;
    double diff_se = 0.0;
    bool agree = false;
    bool sign_definite = false;
    long degenerate_skipped = 0;
    long n_used = 0;
    double tau = 0.0;
};

AoProbability ao_probability(const ModelConfig& cfg, double E, long n, double zero_threshold,
                             double kernel_tol);

// E[Tr 1_I(H)] across interval lengths at the configured box and one doubled
// box; linearity checks in |I| and in the volume at three combined standard
// errors. Not applicable without disorder.
struct WegnerReport {
    std::vector<ScanPoint> by_interval;  // abscissa = |I|
    double ratio_min = 0.0;              // spread of mean / |I|
    double ratio_max = 0.0;
    bool linear_in_interval = false;
    EstimatorResult base_count;
    EstimatorResult doubled_count;
    bool linear_in_volume = false;
    bool applicable = true;
    std::string note;
};

WegnerReport wegner_check(const ModelConfig& cfg, double center,
                          const std::vector<double>& lengths, long n);

// Pathwise max over realizations of || chi_a (H^tau - E)^{-1} chi_b || per
// pair, fitted in the distance. E must stay at least 1/2 below the spectral
// floor.
DecayFit combes_thomas_check(const ModelConfig& cfg, double E,
                             const std::vector<std::pair<Coord, Coord>>& pairs, long n);

// N_L(E) / L^d disorder averaged per grid energy.
std::vector<ScanPoint> ids_estimate(const ModelConfig& cfg, const std::vector<double>& e_grid,
                                    long n);

// E[xi(E)] per grid energy next to a finite-difference density-of-states
// estimate; a point is reported positive when the confidence interval stays
// above zero where the state density is positive. Requires a perturbation
// dominating the single-site profile somewhere, and a non-degenerate law.
struct SsfPositivityPoint {
    double energy = 0.0;
    EstimatorResult xi;
    double dos = 0.0;
    bool positive = false;
};

struct SsfPositivityReport {
    std::vector<SsfPositivityPoint> points;
    long negative_xi_samples = 0;  // monotonicity violations for W >= 0
    std::string note;
};

SsfPositivityReport ssf_positivity_scan(const ModelConfig& cfg, const std::vector<double>& e_grid,
                                        double dos_halfwidth, long n);

// E[Tr 1_Gamma f(H)] against the volume-normalized E[Tr f(H)]; consistency
// means the localized trace stays positive wherever the global one is.
struct UcpReport {
    EstimatorResult gamma_trace;
    EstimatorResult full_trace;
    double dos_weighted = 0.0;
    bool dos_positive = false;
    bool trace_positive = false;
    bool consistent = false;
    std::string note;
};

UcpReport ucp_positivity_check(const ModelConfig& cfg, const SiteSet& gamma, const BVFunction& f,
                               double E, long n);

}  // namespace andersonlab
