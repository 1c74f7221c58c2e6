#pragma once

#include <string>
#include <vector>

#include "andersonlab/model.hpp"
#include "json.hpp"

namespace andersonlab {

using Json = nlohmann::ordered_json;

inline constexpr int k_schema_version = 1;
const char* software_version();

// 17 significant decimal digits, enough to reproduce any double exactly.
std::string format_double(double v);
// Shortest representation that round-trips exactly (config files, human eyes).
std::string format_shortest(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Header plus one line per row, '\n' endings, format_double cells. A cell
// that is not finite is a NumericError naming its column.
std::string to_csv(const Table& t);

Json config_json(const ModelConfig& cfg);

// Serializes with a trailing newline after refusing any non-finite number in
// the tree (nlohmann would silently emit null).
std::string dump_report(const Json& report);

void write_text(const std::string& path, const std::string& bytes);

}  // namespace andersonlab
