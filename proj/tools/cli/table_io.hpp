#pragma once

#include <string>
#include <vector>

namespace qiopa::cli {

// Shortest round-trippable decimal form of a double; stable across runs.
std::string fmt_double(double v);

// RFC-style field quoting: fields with commas, quotes or newlines are quoted,
// embedded quotes doubled.
std::string csv_escape(const std::string& field);

struct CsvBlock {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Writes one or more header+rows blocks separated by blank lines (the extra
// blocks carry summaries such as fit parameters).
void write_csv(const std::string& path, const std::vector<CsvBlock>& blocks);

} // namespace qiopa::cli
