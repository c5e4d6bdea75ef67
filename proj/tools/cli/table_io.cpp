#include "cli/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qiopa::cli {

std::string fmt_double(double v) {
    char buf[40];
    // %.17g always round-trips; shorten when a smaller precision already does
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

std::string csv_escape(const std::string& field) {
    const bool needs_quoting =
        field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quoting) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::string& path, const std::vector<CsvBlock>& blocks) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    bool first = true;
    for (const auto& block : blocks) {
        if (!first) out << '\n';
        first = false;
        for (std::size_t k = 0; k < block.header.size(); ++k)
            out << (k ? "," : "") << csv_escape(block.header[k]);
        out << '\n';
        for (const auto& row : block.rows) {
            for (std::size_t k = 0; k < row.size(); ++k)
                out << (k ? "," : "") << csv_escape(row[k]);
            out << '\n';
        }
    }
}

} // namespace qiopa::cli
