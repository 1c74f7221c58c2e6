#include "andersonlab.h"

#include <string>

#include "andersonlab/config.hpp"
#include "andersonlab/errors.hpp"
#include "andersonlab/report.hpp"
#include "andersonlab/runner.hpp"

struct al_config {
    andersonlab::ModelConfig cfg;
};

struct al_report {
    std::string csv;
    std::string json;
};

namespace {

thread_local int g_status = 0;
thread_local std::string g_error;

void clear_error() {
    g_status = 0;
    g_error.clear();
}

// Runs f under the exception-to-status contract; on_error is the result
// reported to the caller (NULL for pointers, the status itself for ints).
template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    clear_error();
    try {
        return f();
    } catch (const andersonlab::Error& e) {
        g_status = static_cast<int>(e.status());
        g_error = e.what();
    } catch (const std::exception& e) {
        g_status = 2;
        g_error = e.what();
    } catch (...) {
        g_status = 2;
        g_error = "unknown failure";
    }
    return decltype(f()){};
}

}  // namespace

extern "C" {

const char* al_version(void) {
    static const std::string v = andersonlab::software_version();
    return v.c_str();
}

al_config* al_config_parse(const char* text) {
    return guarded([&]() -> al_config* {
        if (!text) throw andersonlab::ConfigError("config text is NULL");
        return new al_config{andersonlab::parse_model_config(text)};
    });
}

al_config* al_config_load(const char* path) {
    return guarded([&]() -> al_config* {
        if (!path) throw andersonlab::ConfigError("config path is NULL");
        return new al_config{andersonlab::load_model_config(path)};
    });
}

int al_config_override(al_config* cfg, const char* key, const char* value) {
    guarded([&]() -> int {
        if (!cfg) throw andersonlab::ConfigError("config handle is NULL");
        if (!key || !value) throw andersonlab::ConfigError("override key or value is NULL");
        andersonlab::set_model_field(cfg->cfg, key, value);
        return 0;
    });
    return g_status;
}

void al_config_free(al_config* cfg) { delete cfg; }

al_report* al_run(const al_config* cfg, const char* subcommand, const char* params_json) {
    return guarded([&]() -> al_report* {
        if (!subcommand) throw andersonlab::ConfigError("subcommand is NULL");
        andersonlab::Json params;
        try {
            params = andersonlab::Json::parse(params_json ? params_json : "{}");
        } catch (const std::exception& e) {
            throw andersonlab::ConfigError(std::string("parameters are not valid JSON: ") +
                                           e.what());
        }
        andersonlab::RunOutput out =
            andersonlab::run_subcommand(subcommand, cfg ? &cfg->cfg : nullptr, params);
        return new al_report{std::move(out.csv), std::move(out.json)};
    });
}

const char* al_report_csv(const al_report* rep) { return rep ? rep->csv.c_str() : nullptr; }

const char* al_report_json(const al_report* rep) { return rep ? rep->json.c_str() : nullptr; }

int al_report_write(const al_report* rep, const char* csv_path, const char* json_path) {
    guarded([&]() -> int {
        if (!rep) throw andersonlab::ConfigError("report handle is NULL");
        if (csv_path) andersonlab::write_text(csv_path, rep->csv);
        if (json_path) andersonlab::write_text(json_path, rep->json);
        return 0;
    });
    return g_status;
}

void al_report_free(al_report* rep) { delete rep; }

int al_last_status(void) { return g_status; }

const char* al_last_error(void) { return g_error.c_str(); }

}  // extern "C"
