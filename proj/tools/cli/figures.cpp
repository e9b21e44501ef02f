#include "figures.hpp"

#include "c3rotor/characteristic.hpp"
#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"
#include "c3rotor/spectrum.hpp"
#include "c3rotor/st_symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace c3rotor::cli {

namespace {

std::string fmt(double v, int digits = 17) {
    if (!std::isfinite(v)) return "";
    return to_string(v, digits);
}

Cell num(double v, int digits = 17) {
    return std::isfinite(v) ? number(fmt(v, digits)) : text("");
}

// ----------------------------------------------------------------- figure 1

Table figure_characteristic() {
    const double lambda = 0.1;
    const auto coupling = real_barrier(lambda);
    const int n = auto_truncation(SymmetrySpecies::RawA, coupling, 5, 1e-12);
    const auto block = build_block(SymmetrySpecies::RawA, coupling, n);

    // D / K with K = prod(1 + d_i), an energy-independent normalization.
    double log10_k = 0;
    for (const double d : block.diag) log10_k += std::log10(1.0 + d);

    const double lo = -2.0, hi = 45.0, step = 0.01;
    std::vector<double> grid;
    for (long i = 0; lo + static_cast<double>(i) * step <= hi + 1e-12; ++i) grid.push_back(lo + static_cast<double>(i) * step);

    // Resolve the quasi-degenerate pairs: sample between and around
    // every pair of neighbouring roots inside the window.
    const int inside = count_below(block, hi);
    const auto roots = block_eigenvalues(block, inside, 1e-13).values();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i] < lo) continue;
        const double left_gap = i > 0 ? roots[i] - roots[i - 1] : 1.0;
        const double right_gap = i + 1 < roots.size() ? roots[i + 1] - roots[i] : 1.0;
        const double gap = std::min({left_gap, right_gap, 1.0});
        grid.push_back(roots[i] - gap / 4);
        grid.push_back(roots[i] + gap / 4);
        if (i + 1 < roots.size()) grid.push_back(0.5 * (roots[i] + roots[i + 1]));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Table table;
    table.add_meta("command", "figure");
    table.add_meta("figure", "1");
    table.add_meta("lambda", "0.1");
    table.add_meta("species", "rawA");
    table.add_meta("truncation", std::to_string(n));
    table.add_meta("compression", "sign(D) * log10(1 + |D| / K), K = prod_i (1 + d_i)");
    table.columns = {"energy", "compressed", "sign", "log10_abs_d"};
    for (const double e : grid) {
        const auto cv = characteristic(block, e);
        const double log_abs = to_double(cv.log10_magnitude());
        const int sign = cv.mantissa > 0 ? 1 : (cv.mantissa < 0 ? -1 : 0);
        const double l = log_abs - log10_k;
        const double compressed = l > 15 ? l : std::log10(1.0 + std::pow(10.0, l));
        table.rows.push_back({num(e), num(sign * compressed), number(std::to_string(sign)), num(log_abs)});
    }
    return table;
}

// ----------------------------------------------------------------- figure 2

Table figure_real_levels(const FigureOptions& options) {
    const int levels = options.levels.value_or(4);
    Table table;
    table.add_meta("command", "figure");
    table.add_meta("figure", "2");
    table.add_meta("quantity", "energy + lambda");
    table.add_meta("lambda_max", fmt(options.lambda_max, 6));
    table.columns = {"lambda"};
    for (int j = 0; j < levels; ++j) table.columns.push_back("E" + std::to_string(j));
    for (int j = 0; j < levels; ++j) table.columns.push_back("A" + std::to_string(j));

    const long steps = static_cast<long>(std::floor(options.lambda_max / options.lambda_step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double lambda = static_cast<double>(i) * options.lambda_step;
        const double tol = 1e-10 * std::max(1.0, lambda);
        const auto coupling = real_barrier(lambda);
        const auto e = solve_spectrum(SymmetrySpecies::EA, coupling, levels, tol).values();
        auto a = solve_spectrum(SymmetrySpecies::APlus, coupling, levels, tol).values();
        const auto odd = solve_spectrum(SymmetrySpecies::AMinus, coupling, levels, tol).values();
        a.insert(a.end(), odd.begin(), odd.end());
        std::sort(a.begin(), a.end());
        std::vector<Cell> row{num(lambda, 10)};
        for (int j = 0; j < levels; ++j) row.push_back(num(e[static_cast<std::size_t>(j)] + lambda));
        for (int j = 0; j < levels; ++j) row.push_back(num(a[static_cast<std::size_t>(j)] + lambda));
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ----------------------------------------------------------------- figure 3

std::optional<ExceptionalPoint<double>> first_ep(SymmetrySpecies species, double g_max) {
    const auto seeds = ep_scan(species, 0.0, std::min(g_max, 100.0), 0.05, 2);
    for (const auto& s : seeds)
        if (s.pair == LevelPair{0, 1}) return to_double_ep(find_exceptional_point<Extended>(species, s.pair, s, 20));
    return std::nullopt;
}

Table figure_first_pair(const FigureOptions& options) {
    const double g_max = options.g_max.value_or(8.0);
    const double g_step = options.g_step.value_or(0.02);
    const std::vector<SymmetrySpecies> blocks{SymmetrySpecies::EA, SymmetrySpecies::APlus};

    Table table;
    table.add_meta("command", "figure");
    table.add_meta("figure", "3");
    table.add_meta("g_max", fmt(g_max, 6));
    table.add_meta("g_step", fmt(g_step, 6));
    table.columns = {"g"};
    for (const char* name : {"E", "A"})
        for (int j = 0; j < 2; ++j) {
            table.columns.push_back(std::string(name) + std::to_string(j) + "_re");
            table.columns.push_back(std::string(name) + std::to_string(j) + "_im");
        }

    std::vector<std::optional<ExceptionalPoint<double>>> eps;
    for (const auto species : blocks) {
        eps.push_back(first_ep(species, g_max));
        if (eps.back())
            table.add_meta(std::string("ep_") + std::string(species_name(species)),
                           "g=" + fmt(eps.back()->g) + " energy=" + fmt(eps.back()->energy));
    }

    const long steps = static_cast<long>(std::floor(g_max / g_step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double g = static_cast<double>(i) * g_step;
        std::vector<Cell> row{num(g, 10)};
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& ep = eps[b];
            std::complex<double> lower, upper;
            if (ep && g >= ep->g) {
                const auto pair = complex_pair_continuation(blocks[b], *ep, g);
                lower = pair.partner();
                upper = pair.value;
            } else {
                const auto real = real_spectrum_st<double>(blocks[b], g, 2, 1e-12);
                if (real.size() >= 2) {
                    lower = real[0];
                    upper = real[1];
                } else {
                    const auto dense = dense_complex_spectrum(blocks[b], g, st_truncation(2, g));
                    lower = dense[0];
                    upper = dense[1];
                }
            }
            for (const auto z : {lower, upper}) {
                row.push_back(num(z.real()));
                row.push_back(num(z.imag()));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ----------------------------------------------------------------- figure 4

Table figure_level_families(const FigureOptions& options) {
    const double g_max = options.g_max.value_or(20.0);
    const double g_step = options.g_step.value_or(0.1);
    const int levels = options.levels.value_or(6);
    const std::vector<SymmetrySpecies> blocks{SymmetrySpecies::EA, SymmetrySpecies::APlus, SymmetrySpecies::AMinus};

    Table table;
    table.add_meta("command", "figure");
    table.add_meta("figure", "4");
    table.add_meta("g_max", fmt(g_max, 6));
    table.add_meta("levels", std::to_string(levels));
    table.add_meta("source", "dense complex eigensolve per g; exceptional points from scan + Newton");

    for (const auto species : blocks) {
        for (const auto& seed : ep_scan(species, 0.0, g_max, 0.05, levels)) {
            try {
                const auto ep = find_exceptional_point<double>(species, seed.pair, seed, 10);
                table.add_meta("ep_" + std::string(species_name(species)) + "_" + std::to_string(seed.pair.first) + "_" +
                                   std::to_string(seed.pair.second),
                               "g=" + fmt(ep.g, 12) + " energy=" + fmt(ep.energy, 12));
            } catch (const NumericalFailure&) {
                // seed outside the Newton basin; the dense data still shows the coalescence
            }
        }
    }

    table.columns = {"g", "species", "level", "re", "im"};
    const long steps = static_cast<long>(std::floor(g_max / g_step + 1e-9));
    for (const auto species : blocks) {
        const int truncation = st_truncation(levels, g_max);
        for (long i = 0; i <= steps; ++i) {
            const double g = static_cast<double>(i) * g_step;
            const auto values = dense_complex_spectrum(species, g, truncation);
            for (int j = 0; j < levels; ++j) {
                const auto z = values[static_cast<std::size_t>(j)];
                // Dense eigensolvers leave ~1e-13 imaginary noise on real roots.
                const double im = std::abs(z.imag()) < 1e-9 ? 0.0 : z.imag();
                table.rows.push_back({num(g, 10), text(std::string(species_name(species))),
                                      number(std::to_string(j)), num(z.real()), num(im)});
            }
        }
    }
    return table;
}

}  // namespace

Table make_figure(const FigureOptions& options) {
    switch (options.id) {
        case 1: return figure_characteristic();
        case 2: return figure_real_levels(options);
        case 3: return figure_first_pair(options);
        case 4: return figure_level_families(options);
        default: throw InvalidArgument("figure id must be 1, 2, 3 or 4");
    }
}

// ------------------------------------------------------------------- SVG

namespace {

struct Curve {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool scatter = false;
};

double cell_value(const Cell& c) {
    if (c.text.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        return std::stod(c.text);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<Curve> curves_for(const FigureOptions& options, const Table& table) {
    std::vector<Curve> curves;
    if (options.id == 4) {
        std::map<std::string, Curve> by_key;
        for (const auto& row : table.rows) {
            auto& c = by_key[row[1].text + " " + row[2].text];
            c.name = row[1].text + " " + row[2].text;
            c.scatter = true;
            c.points.emplace_back(cell_value(row[0]), cell_value(row[3]));
        }
        for (auto& [key, c] : by_key) curves.push_back(std::move(c));
        return curves;
    }
    const std::size_t y_first = 1;
    const std::size_t y_last = options.id == 1 ? 1 : table.columns.size() - 1;
    for (std::size_t col = y_first; col <= y_last; ++col) {
        if (options.id == 3 && table.columns[col].find("_im") != std::string::npos) continue;
        Curve c{table.columns[col], {}, false};
        for (const auto& row : table.rows) c.points.emplace_back(cell_value(row[0]), cell_value(row[col]));
        curves.push_back(std::move(c));
    }
    return curves;
}

}  // namespace

void write_figure_svg(const std::string& path, const FigureOptions& options, const Table& table) {
    const auto curves = curves_for(options, table);
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& c : curves)
        for (const auto& [x, y] : c.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;

    const double width = 800, height = 500, margin = 60;
    auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    auto sy = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open plot file " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
        << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << margin << "\" y=\"" << height - margin / 3 << "\" font-size=\"12\">" << table.columns[0]
        << " from " << fmt(x0, 6) << " to " << fmt(x1, 6) << "; y from " << fmt(y0, 6) << " to " << fmt(y1, 6)
        << "</text>\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = palette[i % (sizeof(palette) / sizeof(palette[0]))];
        const auto& c = curves[i];
        if (c.scatter) {
            for (const auto& [x, y] : c.points)
                if (std::isfinite(x) && std::isfinite(y))
                    out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"1\" fill=\"" << color << "\"/>\n";
            continue;
        }
        std::ostringstream pts;
        for (const auto& [x, y] : c.points)
            if (std::isfinite(x) && std::isfinite(y)) pts << sx(x) << ',' << sy(y) << ' ';
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"" << pts.str()
            << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14 * static_cast<double>(i + 1)
            << "\" font-size=\"10\" fill=\"" << color << "\">" << c.name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace c3rotor::cli
