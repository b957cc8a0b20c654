#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tbci {

// Scientific notation with 17 significant digits (lossless round-trip);
// the fixed format keeps output byte-identical across runs.
std::string format_float(double x);

// Key/value metadata emitted as "# key = value" comment lines before the
// header row of a CSV, or as a "meta" object in JSON.
using MetaBlock = std::vector<std::pair<std::string, std::string>>;

struct Table {
    MetaBlock meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // pre-formatted cells
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

// Writes with '\n' line endings regardless of platform.
void write_file(const std::string& path, const std::string& content);

}  // namespace tbci
