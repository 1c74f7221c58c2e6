#include "andersonlab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "andersonlab/errors.hpp"

namespace andersonlab {

namespace {

std::string chars_of(double v, int precision) {
    char buf[64];
    std::to_chars_result res =
        precision > 0 ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                      precision)
                      : std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void require_finite_tree(const Json& j, const std::string& path) {
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw NumericError("report field '" + path + "' is not finite");
    if (j.is_object())
        for (const auto& [k, v] : j.items()) require_finite_tree(v, path + "/" + k);
    if (j.is_array())
        for (size_t i = 0; i < j.size(); ++i)
            require_finite_tree(j[i], path + "/" + std::to_string(i));
}

Json stencil_json(const Stencil& s) {
    Json out = Json::array();
    for (const auto& [c, v] : s.entries) out.push_back(Json{{"offset", {c[0], c[1]}}, {"value", v}});
    return out;
}

}  // namespace

const char* software_version() { return "0.1.0"; }

std::string format_double(double v) { return chars_of(v, 17); }

std::string format_shortest(double v) { return chars_of(v, 0); }

std::string to_csv(const Table& t) {
    std::string out;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() != t.columns.size())
            throw PreconditionError("table row " + std::to_string(r) + " has " +
                                    std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(t.columns.size()));
        for (size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c]))
                throw NumericError("statistic '" + t.columns[c] + "' is not finite at row " +
                                   std::to_string(r));
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

Json config_json(const ModelConfig& cfg) {
    Json j;
    j["dimension"] = cfg.dimension;
    j["sites_per_side"] = cfg.sites_per_side;
    j["lattice_spacing"] = cfg.lattice_spacing;
    j["coupling"] = cfg.coupling;
    j["perturbation_strength"] = cfg.perturbation_strength;
    j["background"] = cfg.background;
    j["bump_profile"] = stencil_json(cfg.bump_profile);
    j["perturbation"] = stencil_json(cfg.perturbation);
    j["single_site_law"] = Json{{"lo", cfg.single_site_law.lo}, {"hi", cfg.single_site_law.hi}};
    j["seed"] = cfg.seed;
    j["eig_tol"] = cfg.eig_tol;
    j["kernel_tol"] = cfg.kernel_tol;
    j["det_tol"] = cfg.det_tol;
    return j;
}

std::string dump_report(const Json& report) {
    require_finite_tree(report, "");
    return report.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace andersonlab
