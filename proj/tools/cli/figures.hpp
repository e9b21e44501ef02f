#pragma once

#include "table.hpp"

#include <optional>
#include <string>

namespace c3rotor::cli {

struct FigureOptions {
    int id = 1;
    double lambda_max = 100.0;
    double lambda_step = 1.0;
    std::optional<double> g_max;
    std::optional<double> g_step;
    std::optional<int> levels;
};

// 1: compressed characteristic function at lambda = 0.1
// 2: e(lambda) + lambda for the lowest E and A levels
// 3: lowest two E and A+ eigenvalues of H(i g) through their exceptional points
// 4: lowest levels of H(i g) for E, A+ and A-, with the exceptional points found
Table make_figure(const FigureOptions& options);

// Minimal standalone SVG rendering of a figure table.
void write_figure_svg(const std::string& path, const FigureOptions& options, const Table& table);

}  // namespace c3rotor::cli
