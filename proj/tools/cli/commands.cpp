#include "commands.hpp"

#include "figures.hpp"
#include "table.hpp"

#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"
#include "c3rotor/perturbation.hpp"
#include "c3rotor/spectrum.hpp"
#include "c3rotor/st_symmetry.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace c3rotor::cli {

namespace {

constexpr int kDoubleDigits = 15;
constexpr int kMaxDigits = max_requested_digits<Extended>();

struct CommonOptions {
    std::string format = "csv";
    std::string output;
    std::optional<int> precision;
    std::optional<double> tol;
    std::optional<int> truncation;
};

struct SpectrumOptions {
    std::string species;
    std::string lambda = "0";
    int levels = 5;
};

struct SeriesOptions {
    std::string species;
    int level = 0;
    int order = 6;
};

struct SplittingOptions {
    std::vector<int> n{1};
    std::string lambda;
    bool fit = false;
};

struct EpOptions {
    std::string species;
    std::string pair = "0,1";
    int digits = 20;
    std::string scan = "0:10";
    double g_step = 0.05;
};

int resolve_precision(const CommonOptions& common) {
    if (common.precision) return *common.precision;
    if (const char* env = std::getenv("C3ROTOR_PRECISION")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw InvalidArgument("C3ROTOR_PRECISION must be an integer");
        }
    }
    return kDoubleDigits;
}

void validate_precision(int digits) {
    if (digits < 1 || digits > kMaxDigits)
        throw InvalidArgument("--precision must be in [1, " + std::to_string(kMaxDigits) + "]");
}

template <class Real>
constexpr bool is_double = std::is_same_v<Real, double>;

template <class Real>
Real default_tolerance(int digits) {
    if constexpr (is_double<Real>) {
        return 1e-12;
    } else {
        return boost::multiprecision::pow(Real(10), -(digits - 2));
    }
}

template <class Real>
Real resolve_tolerance(const CommonOptions& common, int digits) {
    if (common.tol) return Real(*common.tol);
    return default_tolerance<Real>(digits);
}

template <class Real>
int output_digits(int digits) {
    return is_double<Real> ? 17 : digits;
}

template <class Real>
Cell real_cell(const Real& value, int digits) {
    const std::string rendered = to_string(value, output_digits<Real>(digits));
    const double d = to_double(value);
    if (is_double<Real> && std::isfinite(d)) return number(rendered);
    return text(rendered);
}

template <class Real>
Real parse_value(const std::string& raw, const char* flag) {
    try {
        Real v = parse_real<Real>(raw);
        if (!std::isfinite(to_double(v))) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("invalid value for ") + flag + ": '" + raw + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

template <class F>
auto with_field(int digits, F&& f) {
    if (digits <= kDoubleDigits) return f.template operator()<double>();
    return f.template operator()<Extended>();
}

std::string field_name(int digits) {
    return digits <= kDoubleDigits ? "double" : "extended-" + std::to_string(field_digits<Extended>);
}

void add_common_meta(Table& table, const std::string& command, int digits) {
    table.add_meta("command", command);
    table.add_meta("field", field_name(digits));
    table.add_meta("precision_digits", std::to_string(digits));
}

// ---------------------------------------------------------------- spectrum

Table cmd_spectrum(const SpectrumOptions& opt, const CommonOptions& common) {
    const SymmetrySpecies species = parse_species(opt.species);
    const int digits = resolve_precision(common);
    validate_precision(digits);
    if (opt.levels < 1) throw InvalidArgument("--levels must be >= 1");
    if (common.truncation && *common.truncation < 2) throw InvalidArgument("--truncation must be >= 2");

    return with_field(digits, [&]<class Real>() {
        const Real lambda = parse_value<Real>(opt.lambda, "--lambda");
        const Real tol = resolve_tolerance<Real>(common, digits);
        const auto spectrum = solve_spectrum(species, real_barrier(lambda), opt.levels, tol, common.truncation);

        Table table;
        add_common_meta(table, "spectrum", digits);
        table.add_meta("species", std::string(species_name(species)));
        table.add_meta("lambda", opt.lambda);
        table.add_meta("tol", to_string(tol, 3));
        table.add_meta("truncation", std::to_string(spectrum.truncation_used));
        table.columns = {"species", "level", "energy", "residual"};
        for (const auto& e : spectrum.entries)
            table.rows.push_back({text(std::string(species_name(e.species))), number(std::to_string(e.level)),
                                  real_cell(e.value, digits), real_cell<double>(to_double(e.residual), 3)});
        return table;
    });
}

// ------------------------------------------------------------------ series

Table cmd_series(const SeriesOptions& opt) {
    const SymmetrySpecies species = parse_species(opt.species);
    const auto series = rs_series(species, opt.level, opt.order);
    Table table;
    table.add_meta("command", "series");
    table.add_meta("species", std::string(species_name(species)));
    table.add_meta("level", std::to_string(opt.level));
    table.add_meta("order", std::to_string(opt.order));
    table.add_meta("unperturbed_energy", rational_to_string(series.coeffs.front()));
    table.columns = {"power", "coefficient", "decimal"};
    for (std::size_t j = 0; j < series.coeffs.size(); ++j)
        table.rows.push_back({number(std::to_string(2 * j)), text(rational_to_string(series.coeffs[j])),
                              real_cell(rational_to_real<double>(series.coeffs[j]), kDoubleDigits)});
    return table;
}

// --------------------------------------------------------------- splitting

Table cmd_splitting(const SplittingOptions& opt, const CommonOptions& common) {
    const int digits = resolve_precision(common);
    validate_precision(digits);
    for (int n : opt.n)
        if (n < 1) throw InvalidArgument("--n values must be >= 1");
    const auto lambda_text = split(opt.lambda, ',');
    if (lambda_text.empty()) throw InvalidArgument("--lambda needs at least one value");
    if (opt.fit && lambda_text.size() < 2) throw InvalidArgument("--fit needs at least two --lambda values");

    return with_field(digits, [&]<class Real>() {
        std::vector<Real> lambdas;
        for (const auto& t : lambda_text) {
            lambdas.push_back(parse_value<Real>(t, "--lambda"));
            if (lambdas.back() == 0) throw InvalidArgument("--lambda values must be nonzero");
        }
        const Real tol = resolve_tolerance<Real>(common, digits);

        Table table;
        add_common_meta(table, "splitting", digits);
        table.add_meta("tol", to_string(tol, 3));
        table.columns = {"n", "lambda", "splitting"};
        for (int n : opt.n) {
            std::vector<double> xs, ys;
            for (std::size_t i = 0; i < lambdas.size(); ++i) {
                using std::abs;
                using std::log;
                const Real delta = tunneling_splitting(n, lambdas[i], tol);
                table.rows.push_back({number(std::to_string(n)), text(lambda_text[i]), real_cell(delta, digits)});
                xs.push_back(to_double(log(abs(lambdas[i]))));
                ys.push_back(to_double(log(delta)));
            }
            if (opt.fit) {
                const double m = static_cast<double>(xs.size());
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    sx += xs[i];
                    sy += ys[i];
                    sxx += xs[i] * xs[i];
                    sxy += xs[i] * ys[i];
                }
                const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
                std::ostringstream os;
                os.precision(6);
                os << std::fixed << slope;
                table.add_meta("slope_n" + std::to_string(n), os.str());
            }
        }
        return table;
    });
}

// ---------------------------------------------------------------------- ep

Table cmd_ep(const EpOptions& opt) {
    if (opt.digits < 1 || opt.digits > kMaxDigits)
        throw InvalidArgument("--digits must be in [1, " + std::to_string(kMaxDigits) + "]");
    const auto pair_text = split(opt.pair, ',');
    if (pair_text.size() != 2) throw InvalidArgument("--pair must look like 0,1");
    LevelPair pair;
    try {
        pair = {std::stoi(pair_text[0]), std::stoi(pair_text[1])};
    } catch (const std::exception&) {
        throw InvalidArgument("--pair must look like 0,1");
    }
    if (pair.first < 0 || pair.second <= pair.first) throw InvalidArgument("--pair must be two increasing levels");
    const auto scan_text = split(opt.scan, ':');
    if (scan_text.size() != 2) throw InvalidArgument("--scan must look like lo:hi");
    const double g_lo = parse_value<double>(scan_text[0], "--scan");
    const double g_hi = parse_value<double>(scan_text[1], "--scan");
    if (!(g_lo >= 0 && g_hi > g_lo && g_hi <= 100)) throw InvalidArgument("--scan must satisfy 0 <= lo < hi <= 100");
    if (!(opt.g_step > 0)) throw InvalidArgument("--gstep must be positive");

    std::vector<SymmetrySpecies> blocks;
    const std::string key = opt.species;
    if (key == "A" || key == "a") {
        blocks = {SymmetrySpecies::APlus, SymmetrySpecies::AMinus};
    } else {
        const auto s = parse_species(key);
        if (s == SymmetrySpecies::RawA)
            throw InvalidArgument("use --species A to search both parity blocks of the A states");
        blocks = {s};
    }

    Table table;
    table.add_meta("command", "ep");
    table.add_meta("field", opt.digits <= 8 ? "double" : "extended-" + std::to_string(field_digits<Extended>));
    table.add_meta("species", opt.species);
    table.add_meta("pair", opt.pair);
    table.add_meta("scan", opt.scan);
    table.columns = {"species",  "lower",          "upper",               "g_e",       "energy",
                     "residual_value", "residual_derivative", "precision_digits", "truncation"};

    std::vector<std::string> hosts;
    for (const auto species : blocks) {
        const auto seeds = ep_scan(species, g_lo, g_hi, opt.g_step, pair.second + 1);
        const EpSeed* seed = nullptr;
        for (const auto& s : seeds)
            if (s.pair == pair) {
                seed = &s;
                break;
            }
        if (!seed) continue;
        hosts.emplace_back(species_name(species));
        auto emit = [&](const auto& ep) {
            table.rows.push_back({text(std::string(species_name(species))), number(std::to_string(pair.first)),
                                  number(std::to_string(pair.second)), text(to_string(ep.g, opt.digits)),
                                  text(to_string(ep.energy, opt.digits)), text(to_string(ep.residual_value, 3)),
                                  text(to_string(ep.residual_derivative, 3)), number(std::to_string(ep.precision_digits)),
                                  number(std::to_string(ep.truncation))});
        };
        if (opt.digits <= 8) {
            emit(find_exceptional_point<double>(species, pair, *seed, opt.digits));
        } else {
            emit(find_exceptional_point<Extended>(species, pair, *seed, opt.digits));
        }
    }
    if (hosts.empty()) {
        table.add_meta("result", "no exceptional point in range");
    } else {
        std::string joined;
        for (const auto& h : hosts) joined += (joined.empty() ? "" : ",") + h;
        table.add_meta("host_block", joined);
    }
    return table;
}

void emit(const Table& table, const CommonOptions& common, std::ostream& out) {
    std::unique_ptr<std::ofstream> file;
    std::ostream* target = &out;
    if (!common.output.empty()) {
        file = std::make_unique<std::ofstream>(common.output);
        if (!*file) throw InvalidArgument("cannot open output file " + common.output);
        target = file.get();
    }
    if (common.format == "json") {
        write_json(*target, table);
    } else {
        write_csv(*target, table);
    }
}

void add_common(CLI::App* sub, CommonOptions& common, bool numeric) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", common.output, "Output path (default stdout)");
    if (numeric) {
        sub->add_option("--precision", common.precision, "Significant digits (<=15: double, else 50-digit field)")
            ->check(CLI::Range(1, kMaxDigits));
        sub->add_option("--tol", common.tol, "Absolute eigenvalue tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--truncation", common.truncation, "Basis truncation N (default: automatic)")
            ->check(CLI::Range(2, 100000));
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral solver for the C3-symmetric hindered rigid rotor", "c3rotor"};
    app.set_config("--config", "", "TOML/INI file with defaults; explicit flags win");
    app.require_subcommand(1);

    CommonOptions common;
    SpectrumOptions spectrum_opt;
    SeriesOptions series_opt;
    SplittingOptions splitting_opt;
    EpOptions ep_opt;
    FigureOptions figure_opt;
    std::string plot_path;

    auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenvalues of one symmetry block (real barrier)");
    spectrum->add_option("--species", spectrum_opt.species, "A+, A-, EA, EB or rawA")->required();
    spectrum->add_option("--lambda", spectrum_opt.lambda, "Barrier V3/B");
    spectrum->add_option("--levels", spectrum_opt.levels, "Number of levels")->check(CLI::PositiveNumber);
    add_common(spectrum, common, true);

    auto* series = app.add_subcommand("series", "Exact Rayleigh-Schroedinger coefficients");
    series->add_option("--species", series_opt.species, "A+, A-, EA or EB")->required();
    series->add_option("--level", series_opt.level, "Level within the block")->check(CLI::NonNegativeNumber);
    series->add_option("--order", series_opt.order, "Highest even power of lambda")->check(CLI::Range(0, 40));
    add_common(series, common, false);

    auto* splitting = app.add_subcommand("splitting", "Tunneling splittings of the quasi-degenerate A pairs");
    splitting->add_option("--n", splitting_opt.n, "Pair index (9 n^2 at zero barrier)")->delimiter(',');
    splitting->add_option("--lambda", splitting_opt.lambda, "Comma-separated barrier values")->required();
    splitting->add_flag("--fit", splitting_opt.fit, "Report the log-log slope over the lambda values");
    add_common(splitting, common, true);

    auto* ep = app.add_subcommand("ep", "Exceptional points of H(i g)");
    ep->add_option("--species", ep_opt.species, "EA, EB, A+, A- or A (both parity blocks)")->required();
    ep->add_option("--pair", ep_opt.pair, "Coalescing levels, e.g. 0,1");
    ep->add_option("--digits", ep_opt.digits, "Significant digits of the result");
    ep->add_option("--scan", ep_opt.scan, "Seed scan range lo:hi in g");
    ep->add_option("--gstep", ep_opt.g_step, "Seed scan step in g");
    add_common(ep, common, false);

    auto* figure = app.add_subcommand("figure", "Figure data (1-4) with optional SVG plot");
    figure->add_option("--id", figure_opt.id, "Figure number")->required();
    figure->add_option("--lambda-max", figure_opt.lambda_max, "Figure 2 barrier range")->check(CLI::PositiveNumber);
    figure->add_option("--lambda-step", figure_opt.lambda_step, "Figure 2 step")->check(CLI::PositiveNumber);
    figure->add_option("--g-max", figure_opt.g_max, "Figures 3-4 range in g")->check(CLI::PositiveNumber);
    figure->add_option("--g-step", figure_opt.g_step, "Figures 3-4 step in g")->check(CLI::PositiveNumber);
    figure->add_option("--levels", figure_opt.levels, "Figures 2 and 4 level count")->check(CLI::PositiveNumber);
    figure->add_option("--plot", plot_path, "Also write an SVG plot to this path");
    add_common(figure, common, false);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        std::ostringstream os;
        app.exit(e, os, err);
        out << os.str();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        app.exit(e, os, err);
        err << app.help();
        return kUsageError;
    }

    try {
        Table table;
        if (*spectrum) {
            table = cmd_spectrum(spectrum_opt, common);
        } else if (*series) {
            table = cmd_series(series_opt);
        } else if (*splitting) {
            table = cmd_splitting(splitting_opt, common);
        } else if (*ep) {
            table = cmd_ep(ep_opt);
        } else if (*figure) {
            if (figure_opt.id < 1 || figure_opt.id > 4) throw InvalidArgument("--id must be 1, 2, 3 or 4");
            table = make_figure(figure_opt);
            if (!plot_path.empty()) write_figure_svg(plot_path, figure_opt, table);
        }
        emit(table, common, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kSuccess;
}

}  // namespace c3rotor::cli
