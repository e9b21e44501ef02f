#pragma once

// Exact Rayleigh-Schroedinger series e_n(lambda) = sum_j e_n^(2j) lambda^(2j)
// for one level of one nondegenerate symmetry block.

#include "c3rotor/block.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace c3rotor {

using Rational = boost::multiprecision::cpp_rational;

struct RationalSeries {
    SymmetrySpecies species = SymmetrySpecies::APlus;
    int level = 0;
    // coeffs[j] multiplies lambda^(2j); odd orders vanish identically.
    std::vector<Rational> coeffs;
    int order = 0;
};

// "num/den" (or "num" for integers), the serialization used by the CLI.
std::string rational_to_string(const Rational& value);
Rational parse_rational(const std::string& text);

// Series of the `level`-th lowest unperturbed state of `species` through
// lambda^max_order. Rejects RawA (doubly degenerate), odd or negative
// orders and orders above 40.
RationalSeries rs_series(SymmetrySpecies species, int level, int max_order);

template <class Real>
struct SeriesValue {
    Real value{};
    Real last_term{};
};

// Evaluates the series at coupling squared `lambda_sq`; pass -g^2 for the
// imaginary barrier i g.
template <class Real>
SeriesValue<Real> evaluate_series_squared(const RationalSeries& series, const Real& lambda_sq);

template <class Real>
SeriesValue<Real> evaluate_series(const RationalSeries& series, const Real& lambda) {
    return evaluate_series_squared(series, lambda * lambda);
}

// Harmonic-well limit -lambda + 3 sqrt(lambda/2) (2v + 1). The O(1)
// anharmonic remainder is not included.
template <class Real>
Real asymptotic_energy(int v, const Real& lambda);

template <class Real>
Real rational_to_real(const Rational& value);

}  // namespace c3rotor
