#include "tbci/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "tbci/errors.hpp"

namespace tbci {

namespace {

bool is_plain_number(const std::string& s) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    return end == begin + s.size() && std::isfinite(v);
}

void append_json_string(std::string& out, const std::string& s) {
    out += '"';
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

// numeric cells go out verbatim (they are already valid JSON numbers),
// everything else as a JSON string
void append_json_cell(std::string& out, const std::string& cell) {
    if (is_plain_number(cell)) {
        out += cell;
    } else {
        append_json_string(out, cell);
    }
}

}  // namespace

std::string format_float(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (const auto& [key, value] : table.meta) {
        out += "# " + key + " = " + value + "\n";
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table) {
    std::string out = "{\n  \"meta\": {";
    for (std::size_t i = 0; i < table.meta.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        out += "    ";
        append_json_string(out, table.meta[i].first);
        out += ": ";
        append_json_string(out, table.meta[i].second);
    }
    out += "\n  },\n  \"columns\": [";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ", ";
        append_json_string(out, table.columns[c]);
    }
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += r == 0 ? "\n" : ",\n";
        out += "    [";
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ", ";
            append_json_cell(out, row[c]);
        }
        out += "]";
    }
    out += "\n  ]\n}\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open file for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw ConfigError("write failed: " + path);
}

}  // namespace tbci
