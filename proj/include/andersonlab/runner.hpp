#pragma once

#include <string>

#include "andersonlab/model.hpp"
#include "andersonlab/report.hpp"

namespace andersonlab {

struct RunOutput {
    std::string csv;   // scan table, schema abscissa,mean,stderr,n
    std::string json;  // full report: schema_version, config, params, result
};

// Executes one subcommand against a configuration. `cfg` may be null only
// for the self-contained `verify-identities` suite. Unknown subcommands and
// unknown parameter keys are ConfigErrors; refusals and failures surface as
// the matching Error subclass so the C API can map them to exit codes.
RunOutput run_subcommand(const std::string& name, const ModelConfig* cfg, const Json& params);

}  // namespace andersonlab
