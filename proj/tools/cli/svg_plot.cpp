#include "cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qiopa::cli {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMargin = 56;

const char* kSeriesColors[] = {"#1f6fb2", "#c2452d", "#3a8c4f", "#8a5fb0"};

std::ofstream open_svg(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out;
}

} // namespace

void write_heatmap_svg(const std::string& path, const std::vector<std::vector<double>>& grid,
                       const std::string& title) {
    if (grid.empty() || grid[0].empty()) throw std::invalid_argument("empty heat map grid");
    auto out = open_svg(path);
    const std::size_t rows = grid.size();
    const std::size_t cols = grid[0].size();
    double vmax = 0.0;
    for (const auto& r : grid)
        for (double v : r) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;

    const double cell_w = static_cast<double>(kWidth - 2 * kMargin) / static_cast<double>(cols);
    const double cell_h = static_cast<double>(kHeight - 2 * kMargin) / static_cast<double>(rows);
    out << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    for (std::size_t q = 0; q < rows; ++q) {
        for (std::size_t p = 0; p < cols; ++p) {
            const double t = grid[q][p] / vmax;
            // perceptually fine enough ramp: white -> deep blue
            const int r = static_cast<int>(255 - 215 * t);
            const int g = static_cast<int>(255 - 180 * t);
            const int b = static_cast<int>(255 - 70 * t);
            const double x = kMargin + static_cast<double>(p) * cell_w;
            const double y = static_cast<double>(kHeight - kMargin) - static_cast<double>(q + 1) * cell_h;
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"rgb(" << r << ',' << g << ',' << b
                << ")\"/>\n";
        }
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">p (own mode)</text>\n";
    out << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
        << kHeight / 2 << ")\">q (orthogonal mode)</text>\n";
    out << "</svg>\n";
}

void write_fringe_svg(const std::string& path, const std::vector<double>& phi,
                      const std::vector<Series>& series, const std::string& title) {
    if (phi.empty() || series.empty()) throw std::invalid_argument("empty fringe plot");
    auto out = open_svg(path);
    double xmin = phi.front(), xmax = phi.front(), ymax = 0.0;
    for (double x : phi) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (const auto& s : series)
        for (double v : s.y) ymax = std::max(ymax, v);
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax <= 0.0) ymax = 1.0;

    auto map_x = [&](double x) {
        return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin);
    };
    auto map_y = [&](double y) {
        return (kHeight - kMargin) - y / ymax * (kHeight - 2 * kMargin);
    };

    out << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n<line x1=\"" << kMargin << "\" y1=\"" << kMargin
        << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kSeriesColors[si % 4];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < phi.size(); ++k)
            out << map_x(phi[k]) << ',' << map_y(series[si].y[k]) << ' ';
        out << "\"/>\n";
        for (std::size_t k = 0; k < phi.size(); ++k)
            out << "<circle cx=\"" << map_x(phi[k]) << "\" cy=\"" << map_y(series[si].y[k])
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << kWidth - kMargin - 120 << "\" y=\"" << kMargin + 18 * (si + 1)
            << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << color << "\">"
            << series[si].name << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
        << "injected qubit phase (rad)</text>\n";
    out << "</svg>\n";
}

} // namespace qiopa::cli
