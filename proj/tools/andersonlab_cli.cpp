#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "andersonlab.h"
#include "json.hpp"

using Json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string csv_path;
    std::string json_path;
    bool timing = false;
    bool lenient = false;
};

// A site token is "x" or "x,y"; pairs are "site:site" joined by ';'.
Json parse_site_token(const std::string& text) {
    CLI::results_t parts = CLI::detail::split(text, ',');
    if (parts.empty() || parts.size() > 2)
        throw std::runtime_error("site '" + text + "' is not of the form x or x,y");
    Json site = Json::array();
    for (const auto& p : parts) {
        int v = 0;
        if (!CLI::detail::lexical_cast(p, v))
            throw std::runtime_error("site coordinate '" + p + "' is not an integer");
        site.push_back(v);
    }
    if (site.size() == 1) site.push_back(0);
    return site;
}

Json parse_pairs_arg(const std::string& text) {
    Json pairs = Json::array();
    for (const auto& piece : CLI::detail::split(text, ';')) {
        auto sides = CLI::detail::split(piece, ':');
        if (sides.size() != 2)
            throw std::runtime_error("pair '" + piece + "' is not of the form site:site");
        pairs.push_back(Json::array({parse_site_token(sides[0]), parse_site_token(sides[1])}));
    }
    if (pairs.empty()) throw std::runtime_error("the pair list is empty");
    return pairs;
}

Json parse_sites_arg(const std::string& text) {
    Json sites = Json::array();
    for (const auto& piece : CLI::detail::split(text, ';'))
        sites.push_back(parse_site_token(piece));
    if (sites.empty()) throw std::runtime_error("the site list is empty");
    return sites;
}

void add_common(CLI::App* sub, CommonOpts& o, const std::string& name, bool needs_config) {
    if (needs_config)
        sub->add_option("-c,--config", o.config_path, "model config file")
            ->required()
            ->check(CLI::ExistingFile);
    sub->add_option("--set", o.overrides, "override one [model] key, as key=value")
        ->expected(-1)
        ->take_all();
    sub->add_option("--csv", o.csv_path, "CSV output path, - for stdout")
        ->default_val(name + ".csv");
    sub->add_option("--json", o.json_path, "JSON report path, - for stdout")
        ->default_val(name + ".json");
    sub->add_flag("--timing", o.timing, "record wall time in the report");
}

int fail(const char* stage) {
    std::fprintf(stderr, "andersonlab: %s: %s\n", stage, al_last_error());
    int status = al_last_status();
    return status == 4 ? 2 : status;  // disk trouble is a runtime failure
}

int execute(const std::string& name, const CommonOpts& o, Json params) {
    al_config* cfg = nullptr;
    if (!o.config_path.empty()) {
        cfg = al_config_load(o.config_path.c_str());
        if (!cfg) return fail("config");
        for (const auto& kv : o.overrides) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "andersonlab: --set needs key=value, got '%s'\n",
                             kv.c_str());
                al_config_free(cfg);
                return 1;
            }
            std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (al_config_override(cfg, key.c_str(), value.c_str()) != 0) {
                int rc = fail("config");
                al_config_free(cfg);
                return rc;
            }
        }
    }
    if (o.timing) params["timing"] = true;
    if (o.lenient) params["strict"] = false;

    al_report* rep = al_run(cfg, name.c_str(), params.dump().c_str());
    al_config_free(cfg);
    if (!rep) return fail(name.c_str());

    int rc = 0;
    std::string csv_file = o.csv_path == "-" ? "" : o.csv_path;
    std::string json_file = o.json_path == "-" ? "" : o.json_path;
    if (o.csv_path == "-") std::fputs(al_report_csv(rep), stdout);
    if (o.json_path == "-") std::fputs(al_report_json(rep), stdout);
    if (!csv_file.empty() || !json_file.empty()) {
        if (al_report_write(rep, csv_file.empty() ? nullptr : csv_file.c_str(),
                            json_file.empty() ? nullptr : json_file.c_str()) != 0)
            rc = fail("write");
    }
    al_report_free(rep);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for disordered lattice Schroedinger operators"};
    app.require_subcommand(1);

    int rc = 0;
    auto dispatch = [&rc](const std::string& name, const CommonOpts& o, Json params) {
        rc = execute(name, o, std::move(params));
    };

    // scratch shared by every subcommand; only one fires per invocation
    static CommonOpts common;
    static long realization = 0, n = 0, sub_side = 0, dim = 0, trials = 0;
    static double tau = 0, energy = 0, s = 0, p = 0, zero_threshold = 0, kernel_tol = 0;
    static double dos_halfwidth = 0, center = 0;
    static long seed = 0;
    static std::vector<double> energies, etas, alphas, taus, lengths;
    static std::vector<long> sides;
    static std::string function, kind, pairs_arg, gamma_arg;

    {
        auto* c = app.add_subcommand("spectrum", "eigenvalues of one disorder realization");
        add_common(c, common, "spectrum", true);
        auto* o_r = c->add_option("--realization", realization, "disorder realization index");
        auto* o_t = c->add_option("--tau", tau, "perturbation coupling in [0, 1]");
        c->callback([&, o_r, o_t]() {
            Json ps;
            if (o_r->count()) ps["realization"] = realization;
            if (o_t->count()) ps["tau"] = tau;
            dispatch("spectrum", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("ids", "averaged eigenvalue counting per volume");
        add_common(c, common, "ids", true);
        c->add_option("--E", energies, "energy grid")->required()->expected(-1);
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["energies"] = energies;
            if (o_n->count()) ps["n"] = n;
            dispatch("ids", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("ssf", "averaged spectral shift at fixed energies");
        add_common(c, common, "ssf", true);
        c->add_flag("--lenient", common.lenient, "count degenerate energies instead of refusing");
        c->add_option("--E", energies, "energy grid")->required()->expected(-1);
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["energies"] = energies;
            if (o_n->count()) ps["n"] = n;
            dispatch("ssf", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("overlap", "averaged many-body ground-state overlap");
        add_common(c, common, "overlap", true);
        c->add_flag("--lenient", common.lenient, "count degenerate fillings instead of refusing");
        c->add_option("--E", energies, "Fermi energies")->required()->expected(-1);
        auto* o_n = c->add_option("--n", n, "number of realizations");
        auto* o_z = c->add_option("--zero-threshold", zero_threshold,
                                  "underflow threshold for a vanishing determinant");
        c->callback([&, o_n, o_z]() {
            Json ps;
            ps["energies"] = energies;
            if (o_n->count()) ps["n"] = n;
            if (o_z->count()) ps["zero_threshold"] = zero_threshold;
            dispatch("overlap", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("fmb-scan",
                                     "fractional resolvent moment decay in the distance");
        add_common(c, common, "fmb-scan", true);
        c->add_option("--E", energy, "energy")->required();
        c->add_option("--eta", etas, "imaginary offsets, maximized over")->required()->expected(-1);
        auto* o_s = c->add_option("--s", s, "fractional moment order in (0, 1)");
        c->add_option("--pairs", pairs_arg, "site pairs, as x,y:u,v;...")->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_s, o_n]() {
            Json ps;
            ps["energy"] = energy;
            ps["etas"] = etas;
            if (o_s->count()) ps["s"] = s;
            ps["pairs"] = parse_pairs_arg(pairs_arg);
            if (o_n->count()) ps["n"] = n;
            dispatch("fmb-scan", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("kernel-scan",
                                     "off-diagonal decay of f(H) - f(H + W)");
        add_common(c, common, "kernel-scan", true);
        c->add_option("--f", function, "function literal: indicator(E), ramp(E,w), table(path)")
            ->required();
        auto* o_p = c->add_option("--p", p, "Schatten exponent of the site blocks");
        c->add_option("--pairs", pairs_arg, "site pairs, as x,y:u,v;...")->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_p, o_n]() {
            Json ps;
            ps["function"] = function;
            if (o_p->count()) ps["p"] = p;
            ps["pairs"] = parse_pairs_arg(pairs_arg);
            if (o_n->count()) ps["n"] = n;
            dispatch("kernel-scan", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("boundary-scan",
                                     "finite-volume restriction error vs boundary distance");
        add_common(c, common, "boundary-scan", true);
        c->add_option("--f", function, "function literal")->required();
        auto* o_p = c->add_option("--p", p, "Schatten exponent of the site blocks");
        c->add_option("--sub-side", sub_side, "side length of the centered sub-box")->required();
        c->add_option("--pairs", pairs_arg, "site pairs inside the sub-box")->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_p, o_n]() {
            Json ps;
            ps["function"] = function;
            if (o_p->count()) ps["p"] = p;
            ps["sub_side"] = sub_side;
            ps["pairs"] = parse_pairs_arg(pairs_arg);
            if (o_n->count()) ps["n"] = n;
            dispatch("boundary-scan", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("converge", "volume convergence of kernel, shift, or overlap");
        add_common(c, common, "converge", true);
        c->add_option("--kind", kind, "kernel, ssf, or overlap")->required();
        auto* o_f = c->add_option("--f", function, "function literal (kernel kind only)");
        auto* o_e = c->add_option("--E", energy, "energy (ssf and overlap kinds)");
        auto* o_p = c->add_option("--p", p, "Schatten exponent (kernel kind)");
        c->add_option("--L", sides, "box side lengths, ascending")->required()->expected(-1);
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_f, o_e, o_p, o_n]() {
            Json ps;
            ps["kind"] = kind;
            if (o_f->count()) ps["function"] = function;
            if (o_e->count()) ps["energy"] = energy;
            if (o_p->count()) ps["p"] = p;
            ps["sides"] = sides;
            if (o_n->count()) ps["n"] = n;
            dispatch("converge", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("hoelder",
                                     "modulus of the averaged shift in the energy distance");
        add_common(c, common, "hoelder", true);
        c->add_option("--E", energies, "energy grid, ascending")->required()->expected(-1);
        c->add_option("--alpha", alphas, "candidate Hoelder exponents")->required()->expected(-1);
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["energies"] = energies;
            ps["alphas"] = alphas;
            if (o_n->count()) ps["n"] = n;
            dispatch("hoelder", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("ao-prob",
                                     "orthogonality probability via kernel index and underflow");
        add_common(c, common, "ao-prob", true);
        c->add_flag("--lenient", common.lenient, "skip degenerate realizations instead of refusing");
        c->add_option("--E", energy, "Fermi energy")->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        auto* o_z = c->add_option("--zero-threshold", zero_threshold, "underflow threshold");
        auto* o_k = c->add_option("--kernel-tol", kernel_tol, "kernel resolution tolerance");
        auto* o_t = c->add_option("--tau", taus, "coupling sweep")->expected(-1);
        c->callback([&, o_n, o_z, o_k, o_t]() {
            Json ps;
            ps["energy"] = energy;
            if (o_n->count()) ps["n"] = n;
            if (o_z->count()) ps["zero_threshold"] = zero_threshold;
            if (o_k->count()) ps["kernel_tol"] = kernel_tol;
            if (o_t->count()) ps["taus"] = taus;
            dispatch("ao-prob", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("wegner", "averaged eigenvalue counts in shrinking windows");
        add_common(c, common, "wegner", true);
        c->add_option("--center", center, "window center energy")->required();
        c->add_option("--length", lengths, "window lengths")->required()->expected(-1);
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["center"] = center;
            ps["lengths"] = lengths;
            if (o_n->count()) ps["n"] = n;
            dispatch("wegner", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("combes-thomas",
                                     "resolvent kernel decay below the spectrum");
        add_common(c, common, "combes-thomas", true);
        c->add_option("--E", energy, "real energy strictly below the spectral floor")->required();
        c->add_option("--pairs", pairs_arg, "site pairs, as x,y:u,v;...")->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["energy"] = energy;
            ps["pairs"] = parse_pairs_arg(pairs_arg);
            if (o_n->count()) ps["n"] = n;
            dispatch("combes-thomas", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("ssf-positivity",
                                     "sign of the averaged shift against the local state density");
        add_common(c, common, "ssf-positivity", true);
        c->add_option("--E", energies, "energy grid")->required()->expected(-1);
        c->add_option("--dos-halfwidth", dos_halfwidth, "half width of the density window")
            ->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["energies"] = energies;
            ps["dos_halfwidth"] = dos_halfwidth;
            if (o_n->count()) ps["n"] = n;
            dispatch("ssf-positivity", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("ucp", "positivity of spectral traces on a sub-lattice");
        add_common(c, common, "ucp", true);
        c->add_option("--gamma", gamma_arg, "observation sites, as x,y;x,y;...")->required();
        c->add_option("--f", function, "nonnegative function supported below --E")->required();
        c->add_option("--E", energy, "upper energy bound")->required();
        auto* o_n = c->add_option("--n", n, "number of realizations");
        c->callback([&, o_n]() {
            Json ps;
            ps["gamma"] = parse_sites_arg(gamma_arg);
            ps["function"] = function;
            ps["energy"] = energy;
            if (o_n->count()) ps["n"] = n;
            dispatch("ucp", common, ps);
        });
    }
    {
        auto* c = app.add_subcommand("verify-identities",
                                     "self-contained operator identity and inequality suites");
        add_common(c, common, "verify-identities", false);
        auto* o_d = c->add_option("--dim", dim, "matrix dimension");
        auto* o_t = c->add_option("--trials", trials, "random trials per suite");
        auto* o_s = c->add_option("--seed", seed, "deterministic seed");
        c->callback([&, o_d, o_t, o_s]() {
            Json ps;
            if (o_d->count()) ps["dim"] = dim;
            if (o_t->count()) ps["trials"] = trials;
            if (o_s->count()) ps["seed"] = seed;
            dispatch("verify-identities", common, ps);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "andersonlab: %s\n", e.what());
        return 1;
    }
    return rc;
}
