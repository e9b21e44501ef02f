#include "c3rotor/block.hpp"
#include "c3rotor/characteristic.hpp"
#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"
#include "c3rotor/perturbation.hpp"
#include "c3rotor/spectrum.hpp"
#include "c3rotor/st_symmetry.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace c3rotor;

namespace {

// Up to 15 digits run in doubles; more select the 50-digit field, whose
// values cross the boundary as decimal strings.
constexpr int kDoubleDigits = 15;

Coupling<double> coupling_of(double lambda, double g) {
    if (g != 0 && lambda != 0) throw InvalidArgument("give either lambda or g, not both");
    return g != 0 ? imaginary_barrier(g) : real_barrier(lambda);
}

py::dict block_dict(const std::string& species, double lambda, double g, int truncation) {
    const auto b = build_block(parse_species(species), coupling_of(lambda, g), truncation);
    py::dict d;
    d["species"] = std::string(species_name(b.species));
    d["truncation"] = b.truncation;
    d["diag"] = b.diag;
    d["offprod"] = b.offprod;
    return d;
}

py::list spectrum(const std::string& species, const std::string& lambda, int levels, std::optional<std::string> tol,
                  int digits, std::optional<int> truncation) {
    const auto sp = parse_species(species);
    py::list out;
    if (digits <= kDoubleDigits) {
        const auto s = solve_spectrum(sp, real_barrier(parse_real<double>(lambda)), levels,
                                      tol ? parse_real<double>(*tol) : 1e-12, truncation);
        for (const auto& e : s.entries) out.append(e.value);
    } else {
        const Extended t = tol ? parse_real<Extended>(*tol) : pow(Extended(10), -(digits - 2));
        const auto s = solve_spectrum(sp, real_barrier(parse_real<Extended>(lambda)), levels, t, truncation);
        for (const auto& e : s.entries) out.append(to_string(e.value, digits));
    }
    return out;
}

py::object splitting(int n, const std::string& lambda, int digits) {
    if (digits <= kDoubleDigits) return py::float_(tunneling_splitting(n, parse_real<double>(lambda), 1e-12));
    const Extended value = tunneling_splitting(n, parse_real<Extended>(lambda), pow(Extended(10), -(digits + 10)));
    return py::str(to_string(value, digits));
}

std::vector<std::string> series(const std::string& species, int level, int order) {
    std::vector<std::string> out;
    for (const auto& c : rs_series(parse_species(species), level, order).coeffs) out.push_back(rational_to_string(c));
    return out;
}

py::dict ep_dict(const ExceptionalPoint<Extended>& ep, int digits) {
    py::dict d;
    d["species"] = std::string(species_name(ep.species));
    d["pair"] = py::make_tuple(ep.pair.first, ep.pair.second);
    d["g"] = to_string(ep.g, digits);
    d["energy"] = to_string(ep.energy, digits);
    d["residual_value"] = to_double(ep.residual_value);
    d["residual_derivative"] = to_double(ep.residual_derivative);
    d["precision_digits"] = ep.precision_digits;
    d["truncation"] = ep.truncation;
    return d;
}

py::list exceptional_points(const std::string& species, double g_min, double g_max, double g_step, int levels,
                            int digits) {
    const auto sp = parse_species(species);
    py::list out;
    for (const auto& seed : ep_scan(sp, g_min, g_max, g_step, levels))
        out.append(ep_dict(find_exceptional_point<Extended>(sp, seed.pair, seed, digits), digits));
    return out;
}

std::complex<double> continuation(const std::string& species, py::dict ep, double g) {
    ExceptionalPoint<double> e;
    e.species = parse_species(species);
    const auto pair = ep["pair"].cast<std::tuple<int, int>>();
    e.pair = {std::get<0>(pair), std::get<1>(pair)};
    e.g = std::stod(ep["g"].cast<std::string>());
    e.energy = std::stod(ep["energy"].cast<std::string>());
    e.truncation = ep["truncation"].cast<int>();
    e.precision_digits = ep["precision_digits"].cast<int>();
    return complex_pair_continuation(e.species, e, g).value;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral solver for the C3 hindered rotor";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

    m.def("build_block", &block_dict, py::arg("species"), py::arg("lambda_") = 0.0, py::arg("g") = 0.0,
          py::arg("truncation"));
    m.def(
        "count_below",
        [](const std::string& species, double lambda, int truncation, double energy) {
            return count_below(build_block(parse_species(species), real_barrier(lambda), truncation), energy);
        },
        py::arg("species"), py::arg("lambda_"), py::arg("truncation"), py::arg("energy"));
    m.def(
        "characteristic",
        [](const std::string& species, double lambda, double g, int truncation, double energy) {
            const auto v = characteristic(build_block(parse_species(species), coupling_of(lambda, g), truncation), energy);
            return py::make_tuple(v.mantissa, v.exponent);
        },
        py::arg("species"), py::arg("lambda_") = 0.0, py::arg("g") = 0.0, py::arg("truncation"), py::arg("energy"),
        "(mantissa, exponent) with value = mantissa * 10**exponent");
    m.def("solve_spectrum", &spectrum, py::arg("species"), py::arg("lambda_"), py::arg("levels"),
          py::arg("tol") = py::none(), py::arg("digits") = kDoubleDigits, py::arg("truncation") = py::none());
    m.def(
        "dense_oracle",
        [](const std::string& species, double lambda, int truncation, int levels) {
            return dense_oracle(build_block(parse_species(species), real_barrier(lambda), truncation), levels).values();
        },
        py::arg("species"), py::arg("lambda_"), py::arg("truncation"), py::arg("levels"));
    m.def("tunneling_splitting", &splitting, py::arg("n"), py::arg("lambda_"), py::arg("digits") = kDoubleDigits);
    m.def("rs_series", &series, py::arg("species"), py::arg("level"), py::arg("order"),
          "Exact coefficients of lambda^0, lambda^2, ... as 'num/den' strings");
    m.def("asymptotic_energy", &asymptotic_energy<double>, py::arg("v"), py::arg("lambda_"));
    m.def(
        "real_spectrum_st",
        [](const std::string& species, double g, int levels, double tol) {
            return real_spectrum_st(parse_species(species), g, levels, tol).values();
        },
        py::arg("species"), py::arg("g"), py::arg("levels"), py::arg("tol") = 1e-12);
    m.def("exceptional_points", &exceptional_points, py::arg("species"), py::arg("g_min") = 0.0,
          py::arg("g_max") = 10.0, py::arg("g_step") = 0.05, py::arg("levels") = 2, py::arg("digits") = 20);
    m.def("complex_pair_continuation", &continuation, py::arg("species"), py::arg("ep"), py::arg("g"));
    m.def(
        "dense_complex_spectrum",
        [](const std::string& species, double g, int truncation) {
            return dense_complex_spectrum(parse_species(species), g, truncation);
        },
        py::arg("species"), py::arg("g"), py::arg("truncation"));
}
