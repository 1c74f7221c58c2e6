#include <cstdio>
#include <fstream>
#include <string>

#include "andersonlab/config.hpp"
#include "andersonlab/errors.hpp"
#include "doctest.h"

using namespace andersonlab;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/andersonlab_test_" + name;
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.close();
    return path;
}

const char* k_full_config = R"cfg(
# disordered line with a rank-two bump
[model]
dimension = 2
sites_per_side = 12
lattice_spacing = 0.5
coupling = 1.25
perturbation_strength = 0.75
background = 0.1, 0.2, 0.3, 0.4
bump_profile = (0,0): 1.0; (1,0): 0.5
perturbation = (0,0): 2.0; (0,1): 1.0
single_site_law = uniform(0.25, 0.75)
seed = 42
eig_tol = 1e-10
kernel_tol = 1e-5
det_tol = 1e-7
)cfg";

}  // namespace

TEST_CASE("a full config file parses into the expected fields") {
    ModelConfig cfg = parse_model_config(k_full_config);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.sites_per_side == 12);
    CHECK(cfg.lattice_spacing == 0.5);
    CHECK(cfg.coupling == 1.25);
    CHECK(cfg.perturbation_strength == 0.75);
    REQUIRE(cfg.background.size() == 4);
    CHECK(cfg.background[1] == 0.2);
    REQUIRE(cfg.bump_profile.entries.size() == 2);
    CHECK(cfg.bump_profile.value_at(Coord{1, 0}) == 0.5);
    REQUIRE(cfg.perturbation.entries.size() == 2);
    CHECK(cfg.perturbation.value_at(Coord{0, 1}) == 1.0);
    CHECK(cfg.single_site_law.lo == 0.25);
    CHECK(cfg.single_site_law.hi == 0.75);
    CHECK(cfg.seed == 42);
    CHECK(cfg.eig_tol == 1e-10);
    CHECK(cfg.kernel_tol == 1e-5);
    CHECK(cfg.det_tol == 1e-7);
}

TEST_CASE("omitted keys keep their defaults") {
    ModelConfig cfg = parse_model_config("[model]\nsites_per_side = 30\n");
    ModelConfig dflt;
    CHECK(cfg.sites_per_side == 30);
    CHECK(cfg.dimension == dflt.dimension);
    CHECK(cfg.coupling == dflt.coupling);
    CHECK(cfg.seed == dflt.seed);
    CHECK(cfg.single_site_law.lo == 0.0);
    CHECK(cfg.single_site_law.hi == 1.0);
    CHECK(cfg.background.empty());
    CHECK(cfg.perturbation.empty());
}

TEST_CASE("serialize and parse round-trip byte for byte") {
    ModelConfig cfg = parse_model_config(k_full_config);
    std::string once = serialize(cfg);
    ModelConfig back = parse_model_config(once);
    std::string twice = serialize(back);
    CHECK(once == twice);
    CHECK(back.coupling == cfg.coupling);
    CHECK(back.perturbation.entries == cfg.perturbation.entries);
    CHECK(back.background == cfg.background);
    CHECK(back.single_site_law.lo == cfg.single_site_law.lo);

    // shortest-round-trip floats survive the cycle exactly
    cfg.lattice_spacing = 0.1;
    cfg.eig_tol = 3.0303e-11;
    ModelConfig again = parse_model_config(serialize(cfg));
    CHECK(again.lattice_spacing == 0.1);
    CHECK(again.eig_tol == 3.0303e-11);
}

TEST_CASE("malformed input is refused with the offending key named") {
    CHECK_THROWS_WITH_AS(parse_model_config("[model]\ntypo_key = 1\n"),
                         doctest::Contains("typo_key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_model_config("[lattice]\ndimension = 1\n"),
                         doctest::Contains("lattice"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_model_config("dimension = 1\n"),
                         doctest::Contains("before any section"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_model_config("[model]\nseed = 1\nseed = 2\n"),
                         doctest::Contains("seed"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_model_config("[model]\ncoupling = fast\n"),
                         doctest::Contains("coupling"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("[model]\ndimension = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("[model]\nno equals sign here\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("[model\ndimension = 1\n"), ConfigError);
}

TEST_CASE("validation runs on the parsed result") {
    CHECK_THROWS_AS(parse_model_config("[model]\ndimension = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("[model]\nperturbation_strength = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("[model]\nsingle_site_law = uniform(1, 0)\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_model_config("[model]\nsingle_site_law = uniform(-0.5, 0.5)\n"),
                    ConfigError);
    // background period must divide the side length
    CHECK_THROWS_AS(parse_model_config("[model]\nsites_per_side = 5\nbackground = 1, 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_model_config("[model]\ndimension = 2\nsites_per_side = 4\nbackground = 1, 2, 3\n"),
        ConfigError);
}

TEST_CASE("comments and spacing are ignored") {
    ModelConfig cfg = parse_model_config(
        "  # leading comment\n"
        "[model]   # trailing comment\n"
        "   coupling=2.0#tight\n"
        "\n"
        "seed   =   7\n");
    CHECK(cfg.coupling == 2.0);
    CHECK(cfg.seed == 7);
}

TEST_CASE("stencil literals parse and serialize") {
    Stencil s = parse_stencil("(0,0): 1.5; (-1,2): 0.25");
    REQUIRE(s.entries.size() == 2);
    CHECK(s.value_at(Coord{0, 0}) == 1.5);
    CHECK(s.value_at(Coord{-1, 2}) == 0.25);
    CHECK(s.value_at(Coord{5, 5}) == 0.0);

    Stencil back = parse_stencil(serialize(s));
    CHECK(back.entries == s.entries);

    CHECK_THROWS_AS(parse_stencil("(0): 1.0"), ConfigError);
    CHECK_THROWS_AS(parse_stencil("(0,0) 1.0"), ConfigError);
    CHECK_THROWS_AS(parse_stencil("(0,0): soft"), ConfigError);
    CHECK_THROWS_AS(parse_stencil("(0,0): 1; (0,0): 2"), ConfigError);
}

TEST_CASE("single field overrides reuse the file syntax") {
    ModelConfig cfg;
    set_model_field(cfg, "coupling", "3.5");
    set_model_field(cfg, "perturbation", "(0,0): 1.0");
    set_model_field(cfg, "single_site_law", "uniform(0, 2)");
    CHECK(cfg.coupling == 3.5);
    CHECK(cfg.perturbation.value_at(Coord{0, 0}) == 1.0);
    CHECK(cfg.single_site_law.hi == 2.0);
    CHECK_THROWS_WITH_AS(set_model_field(cfg, "speed", "1"), doctest::Contains("speed"),
                         ConfigError);
}

TEST_CASE("config files load from disk and missing paths are io errors") {
    std::string path = write_temp("cfg.ini", k_full_config);
    ModelConfig cfg = load_model_config(path);
    CHECK(cfg.sites_per_side == 12);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_model_config("/tmp/andersonlab_does_not_exist.ini"), ConfigError);
}

TEST_CASE("function literals cover the step, ramp, and tabulated cases") {
    BVFunction step = parse_function_literal("indicator(2.5)");
    CHECK(step(2.0) == 1.0);
    CHECK(step(3.0) == 0.0);

    BVFunction r = parse_function_literal("ramp(1.0, 0.5)");
    CHECK(r(0.0) == 1.0);
    CHECK(r(2.0) == 0.0);
    CHECK(r(1.0) == doctest::Approx(0.5));

    std::string path = write_temp("table.dat", "0.0 1.0\n1.0 0.5\n2.0 0.0\n");
    BVFunction t = parse_function_literal("table(" + path + ")");
    CHECK(t(0.5) == doctest::Approx(0.75));
    std::remove(path.c_str());

    CHECK_THROWS_WITH_AS(parse_function_literal("gaussian(1.0)"), doctest::Contains("gaussian"),
                         ConfigError);
    CHECK_THROWS_AS(parse_function_literal("indicator()"), ConfigError);
    CHECK_THROWS_AS(parse_function_literal("ramp(1.0)"), ConfigError);
    CHECK_THROWS_AS(parse_function_literal("table(/tmp/andersonlab_no_table.dat)"), ConfigError);
    std::string bad = write_temp("bad_table.dat", "0.0 1.0\nnot numbers\n");
    CHECK_THROWS_AS(parse_function_literal("table(" + bad + ")"), ConfigError);
    std::remove(bad.c_str());
}
