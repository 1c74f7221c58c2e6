#include "andersonlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "andersonlab/errors.hpp"
#include "andersonlab/report.hpp"

namespace andersonlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    for (;;) {
        size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

double parse_number(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("key '" + key + "' has a malformed number: '" + text + "'");
    return v;
}

long parse_integer(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    long v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("key '" + key + "' has a malformed integer: '" + text + "'");
    return v;
}

uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    uint64_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("key '" + key + "' has a malformed unsigned integer: '" + text + "'");
    return v;
}

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& piece : split(text, ',')) out.push_back(parse_number(key, piece));
    return out;
}

SiteLaw parse_law(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    if (t.rfind("uniform(", 0) != 0 || t.back() != ')')
        throw ConfigError("key '" + key + "' expects uniform(lo, hi), got '" + text + "'");
    auto inner = split(t.substr(8, t.size() - 9), ',');
    if (inner.size() != 2)
        throw ConfigError("key '" + key + "' expects two bounds, got '" + text + "'");
    return {parse_number(key, inner[0]), parse_number(key, inner[1])};
}

}  // namespace

Stencil parse_stencil(const std::string& text) {
    Stencil s;
    if (trim(text).empty()) return s;
    for (const auto& piece : split(text, ';')) {
        std::string t = trim(piece);
        size_t close = t.find(')');
        if (t.empty() || t.front() != '(' || close == std::string::npos)
            throw ConfigError("stencil entry '" + piece + "' is not of the form (dx,dy): value");
        auto coords = split(t.substr(1, close - 1), ',');
        if (coords.size() != 2)
            throw ConfigError("stencil entry '" + piece + "' needs two offsets");
        std::string rest = trim(t.substr(close + 1));
        if (rest.empty() || rest.front() != ':')
            throw ConfigError("stencil entry '" + piece + "' is missing the ': value' part");
        Coord c = {static_cast<int>(parse_integer("stencil", coords[0])),
                   static_cast<int>(parse_integer("stencil", coords[1]))};
        if (std::any_of(s.entries.begin(), s.entries.end(),
                        [&](const auto& e) { return e.first == c; }))
            throw ConfigError("stencil offset (" + std::to_string(c[0]) + "," +
                              std::to_string(c[1]) + ") appears twice");
        s.entries.push_back({c, parse_number("stencil", rest.substr(1))});
    }
    return s;
}

std::string serialize(const Stencil& s) {
    std::string out;
    for (size_t i = 0; i < s.entries.size(); ++i) {
        if (i) out += "; ";
        out += "(" + std::to_string(s.entries[i].first[0]) + "," +
               std::to_string(s.entries[i].first[1]) + "): " +
               format_shortest(s.entries[i].second);
    }
    return out;
}

void set_model_field(ModelConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dimension")
        cfg.dimension = static_cast<int>(parse_integer(key, value));
    else if (key == "sites_per_side")
        cfg.sites_per_side = static_cast<int>(parse_integer(key, value));
    else if (key == "lattice_spacing")
        cfg.lattice_spacing = parse_number(key, value);
    else if (key == "coupling")
        cfg.coupling = parse_number(key, value);
    else if (key == "perturbation_strength")
        cfg.perturbation_strength = parse_number(key, value);
    else if (key == "background")
        cfg.background = parse_number_list(key, value);
    else if (key == "bump_profile")
        cfg.bump_profile = parse_stencil(value);
    else if (key == "perturbation")
        cfg.perturbation = parse_stencil(value);
    else if (key == "single_site_law")
        cfg.single_site_law = parse_law(key, value);
    else if (key == "seed")
        cfg.seed = parse_unsigned(key, value);
    else if (key == "eig_tol")
        cfg.eig_tol = parse_number(key, value);
    else if (key == "kernel_tol")
        cfg.kernel_tol = parse_number(key, value);
    else if (key == "det_tol")
        cfg.det_tol = parse_number(key, value);
    else
        throw ConfigError("unknown key '" + key + "' in [model]");
}

ModelConfig parse_model_config(const std::string& text) {
    ModelConfig cfg;
    std::string section;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    long lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = line.substr(1, line.size() - 2);
            if (section != "model") throw ConfigError("unknown section '[" + section + "]'");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value, got '" +
                              line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("key '" + key + "' appears before any section");
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        set_model_field(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str());
}

std::string serialize(const ModelConfig& cfg) {
    std::string out = "[model]\n";
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    kv("dimension", std::to_string(cfg.dimension));
    kv("sites_per_side", std::to_string(cfg.sites_per_side));
    kv("lattice_spacing", format_shortest(cfg.lattice_spacing));
    kv("coupling", format_shortest(cfg.coupling));
    kv("perturbation_strength", format_shortest(cfg.perturbation_strength));
    if (!cfg.background.empty()) {
        std::string list;
        for (size_t i = 0; i < cfg.background.size(); ++i) {
            if (i) list += ", ";
            list += format_shortest(cfg.background[i]);
        }
        kv("background", list);
    }
    if (!cfg.bump_profile.empty()) kv("bump_profile", serialize(cfg.bump_profile));
    if (!cfg.perturbation.empty()) kv("perturbation", serialize(cfg.perturbation));
    kv("single_site_law", "uniform(" + format_shortest(cfg.single_site_law.lo) + ", " +
                              format_shortest(cfg.single_site_law.hi) + ")");
    kv("seed", std::to_string(cfg.seed));
    kv("eig_tol", format_shortest(cfg.eig_tol));
    kv("kernel_tol", format_shortest(cfg.kernel_tol));
    kv("det_tol", format_shortest(cfg.det_tol));
    return out;
}

BVFunction parse_function_literal(const std::string& text) {
    std::string t = trim(text);
    size_t open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw ConfigError("function literal '" + text +
                          "' is not of the form name(arguments)");
    std::string name = trim(t.substr(0, open));
    std::string args = t.substr(open + 1, t.size() - open - 2);
    if (name == "indicator") {
        return indicator(parse_number("indicator", args));
    }
    if (name == "ramp") {
        auto parts = split(args, ',');
        if (parts.size() != 2) throw ConfigError("ramp(E, width) needs two arguments");
        return ramp(parse_number("ramp", parts[0]), parse_number("ramp", parts[1]));
    }
    if (name == "table") {
        std::string path = trim(args);
        std::ifstream in(path);
        if (!in) throw ConfigError("table function file '" + path + "' cannot be opened");
        std::vector<std::pair<double, double>> pts;
        double x = 0.0, y = 0.0;
        while (in >> x >> y) pts.push_back({x, y});
        if (!in.eof()) throw ConfigError("table function file '" + path + "' has malformed rows");
        if (pts.size() < 2)
            throw ConfigError("table function file '" + path + "' needs at least two rows");
        return table_function(pts);
    }
    throw ConfigError("unknown function literal '" + name + "'");
}

}  // namespace andersonlab
