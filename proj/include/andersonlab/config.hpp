#pragma once

#include <string>

#include "andersonlab/funcalc.hpp"
#include "andersonlab/model.hpp"

namespace andersonlab {

// Line-oriented `key = value` text. Model fields live in a [model] section
// and carry exactly the struct member names; unknown sections, unknown keys,
// duplicate keys, and malformed values are ConfigErrors naming the offender.
// Parsing validates the resulting configuration.
ModelConfig parse_model_config(const std::string& text);
ModelConfig load_model_config(const std::string& path);

// Canonical text form; parse_model_config(serialize(cfg)) reproduces cfg and
// serializing again reproduces the bytes.
std::string serialize(const ModelConfig& cfg);

// One `key = value` assignment on an existing configuration (CLI overrides).
// Does not revalidate; callers do once all overrides are in.
void set_model_field(ModelConfig& cfg, const std::string& key, const std::string& value);

// `(dx,dy): value; (dx,dy): value; ...`, empty text = empty stencil.
Stencil parse_stencil(const std::string& text);
std::string serialize(const Stencil& s);

// Function literals: `indicator(E)`, `ramp(E,width)`, `table(path)`.
// A table file holds one `x y` pair per line, abscissas strictly ascending.
BVFunction parse_function_literal(const std::string& text);

}  // namespace andersonlab
