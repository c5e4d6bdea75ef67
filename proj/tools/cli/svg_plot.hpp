#pragma once

#include <string>
#include <vector>

namespace qiopa::cli {

// Minimal self-contained SVG output; plots are a convenience, the CSV files
// are the contract.

// Grid heat map, value range mapped to a light-to-dark ramp; cell (p, q)
// drawn at column p, row q.
void write_heatmap_svg(const std::string& path, const std::vector<std::vector<double>>& grid,
                       const std::string& title);

// Phase-scan overlay of named count series.
struct Series {
    std::string name;
    std::vector<double> y;
};

void write_fringe_svg(const std::string& path, const std::vector<double>& phi,
                      const std::vector<Series>& series, const std::string& title);

} // namespace qiopa::cli
