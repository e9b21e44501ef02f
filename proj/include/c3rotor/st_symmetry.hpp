#pragma once

// Space-time symmetric rotor H(i g) = -d^2/dphi^2 + i g cos(3 phi).
//
// The off-diagonal elements i g / 2 enter the characteristic recursion
// only through their products -g^2 / 4, so below the first exceptional
// point every computation stays in real arithmetic. Real eigenvalues of
// such a block lie in [min diag, max diag] (the matrix is similar to a
// real diagonal-plus-skew-symmetric one), which bounds the scan window.

#include "c3rotor/block.hpp"
#include "c3rotor/spectrum.hpp"

#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace c3rotor {

using LevelPair = std::pair<int, int>;

struct EpSeed {
    SymmetrySpecies species = SymmetrySpecies::EA;
    double g = 0;
    double energy = 0;
    LevelPair pair{0, 1};
};

template <class Real>
struct ExceptionalPoint {
    SymmetrySpecies species = SymmetrySpecies::EA;
    LevelPair pair{0, 1};
    Real g{};
    Real energy{};
    // |D / D_ee| and |D_e / D_ee| at the solution: the squared and linear
    // distance scales of the double root, independent of D's normalization.
    Real residual_value{};
    Real residual_derivative{};
    int precision_digits = 0;
    int truncation = 0;
};

struct ComplexPair {
    double g = 0;
    std::complex<double> value;  // Im > 0; the partner is std::conj(value)

    std::complex<double> partner() const { return std::conj(value); }
};

struct ScanOptions {
    // Maximum number of interval halvings when chasing a sign change.
    int max_refinements = 400;
    // Window of the scan: up to midway between unperturbed levels k-1 and k.
    std::optional<double> upper_energy;
};

// Real eigenvalues of H(i g) among the lowest `count` levels, ascending.
// Fewer than `count` entries means some pair has already coalesced.
template <class Real>
Spectrum<Real> real_spectrum_st(SymmetrySpecies species, const Real& g, int count, const Real& tol,
                                std::optional<int> truncation = std::nullopt, const ScanOptions& options = {});

// Truncation used by real_spectrum_st when none is given.
int st_truncation(int count, double g);

// Sweeps g over [g_min, g_max] and returns a seed wherever two tracked real
// roots disappear between consecutive samples (or their gap has a sharp
// local minimum, below 5% of the unperturbed gap).
std::vector<EpSeed> ep_scan(SymmetrySpecies species, double g_min, double g_max, double g_step, int count);

// Solves D = dD/de = 0 for (e, g) by Newton's method with the full 2x2
// Jacobian, raising the truncation until g_e is stable to
// `precision_digits`.
template <class Real>
ExceptionalPoint<Real> find_exceptional_point(SymmetrySpecies species, LevelPair pair, const EpSeed& seed,
                                              int precision_digits);

// Root of D(e, g) = 0 with Im e > 0 beyond the exceptional point, followed
// from the branch point e_e + i delta, delta ~ sqrt(g - g_e), by
// continuation in g. Runs in double precision.
ComplexPair complex_pair_continuation(SymmetrySpecies species, const ExceptionalPoint<double>& ep, double g);

// Oracle for the broken phase: eigenvalues of the dense complex symmetric
// block with off-diagonal i g / 2, sorted by real part.
std::vector<std::complex<double>> dense_complex_spectrum(SymmetrySpecies species, double g, int truncation);

template <class Real>
ExceptionalPoint<double> to_double_ep(const ExceptionalPoint<Real>& ep);

}  // namespace c3rotor
