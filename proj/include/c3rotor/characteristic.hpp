#pragma once

// Characteristic function of a truncated block, evaluated by the
// three-term principal-minor recursion
//
//     D_{-1} = 1,  D_0 = d_0 - e,  D_k = (d_k - e) D_{k-1} - p_k D_{k-2},
//
// which is the recurrence-relation route to the secular determinant:
// D_{M-1}(e) vanishes exactly at the eigenvalues of the M x M block.
// Minors grow like prod(d_k - e), so every kernel rescales by powers of two
// and carries the binary exponent separately.

#include "c3rotor/block.hpp"
#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace c3rotor {

// Terminal value of the recursion as mantissa * 10^exponent with
// |mantissa| <= 1, plus the Sturm count (number of eigenvalues strictly
// below the evaluation point; meaningful for real barriers only).
template <class Real>
struct CharacteristicValue {
    Real mantissa{};
    long exponent = 0;
    int sign_changes = 0;

    // log10 |D|, or -infinity for an exact zero.
    Real log10_magnitude() const {
        using std::abs;
        using std::log10;
        if (mantissa == 0) return -std::numeric_limits<Real>::infinity();
        return log10(abs(mantissa)) + Real(exponent);
    }
};

namespace detail {

inline constexpr int kRescaleBits = 128;

template <class Scalar>
auto magnitude(const Scalar& x) {
    using std::abs;
    return abs(x);
}

template <class Scalar>
void scale_by_power_of_two(Scalar& x, int bits) {
    using std::ldexp;
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
        x *= std::ldexp(1.0, bits);
    } else {
        x = ldexp(x, bits);
    }
}

// Keeps the largest tracked quantity within [2^-128, 2^128].
template <class Scalar, std::size_t K>
void rescale(Scalar (&values)[K], long& exponent2) {
    using Mag = decltype(magnitude(values[0]));
    Mag largest = 0;
    for (const auto& v : values) {
        const Mag m = magnitude(v);
        if (m > largest) largest = m;
    }
    if (largest == 0) return;
    using std::ldexp;
    const Mag hi = ldexp(Mag(1), kRescaleBits);
    const Mag lo = ldexp(Mag(1), -kRescaleBits);
    while (largest > hi) {
        for (auto& v : values) scale_by_power_of_two(v, -kRescaleBits);
        largest = ldexp(largest, -kRescaleBits);
        exponent2 += kRescaleBits;
    }
    while (largest < lo) {
        for (auto& v : values) scale_by_power_of_two(v, kRescaleBits);
        largest = ldexp(largest, kRescaleBits);
        exponent2 -= kRescaleBits;
    }
}

template <class Real>
int sign_of(const Real& x) {
    return (x > 0) - (x < 0);
}

}  // namespace detail

// D(e) and dD/de sharing one binary scale factor 2^exponent2.
template <class Scalar>
struct ScaledDerivativePair {
    Scalar value{};
    Scalar derivative{};
    long exponent2 = 0;
    int sign_changes = 0;
};

// Evaluates D and dD/de by differentiating the recursion exactly.
// `Scalar` may be the block's Real type or std::complex<double> (for a
// double block) when roots leave the real axis.
template <class Real, class Scalar = Real>
ScaledDerivativePair<Scalar> characteristic_with_derivative(const BlockOperator<Real>& block,
                                                            const Scalar& energy) {
    constexpr bool real_scalar = std::is_same_v<Scalar, Real>;
    ScaledDerivativePair<Scalar> out;

    // {D_{k-2}, D_{k-1}, D'_{k-2}, D'_{k-1}}
    Scalar s[4] = {Scalar(0), Scalar(1), Scalar(0), Scalar(0)};
    int previous_sign = 1;
    for (std::size_t k = 0; k < block.dimension(); ++k) {
        const Scalar a = Scalar(block.diag[k]) - energy;
        const Scalar p = Scalar(block.offprod[k]);
        const Scalar d = a * s[1] - p * s[0];
        const Scalar dd = -s[1] + a * s[3] - p * s[2];
        s[0] = s[1];
        s[1] = d;
        s[2] = s[3];
        s[3] = dd;
        if constexpr (real_scalar) {
            // A zero minor inherits the previous sign: an exact root at the
            // end is then not counted as "below".
            int sg = detail::sign_of(d);
            if (sg == 0) sg = previous_sign;
            if (sg != previous_sign) ++out.sign_changes;
            previous_sign = sg;
        }
        detail::rescale(s, out.exponent2);
    }
    out.value = s[1];
    out.derivative = s[3];
    return out;
}

template <class Real>
CharacteristicValue<Real> characteristic(const BlockOperator<Real>& block, const Real& energy) {
    using std::floor;
    using std::log10;
    using std::abs;
    using std::pow;
    const auto pair = characteristic_with_derivative(block, energy);
    CharacteristicValue<Real> out;
    out.sign_changes = pair.sign_changes;
    if (pair.value == 0) return out;
    // value * 2^e2 = mantissa * 10^e10 with |mantissa| <= 1
    const Real log10_total = log10(abs(pair.value)) + Real(pair.exponent2) * log10(Real(2));
    long e10 = static_cast<long>(to_double(floor(log10_total))) + 1;
    Real mantissa = detail::sign_of(pair.value) * pow(Real(10), log10_total - Real(e10));
    if (abs(mantissa) > 1) {
        mantissa /= 10;
        ++e10;
    }
    out.mantissa = mantissa;
    out.exponent = e10;
    return out;
}

// Number of eigenvalues strictly below `energy` (Sturm count). Requires a
// real barrier: with negative off-diagonal products the count is not an
// eigenvalue count.
template <class Real>
int count_below(const BlockOperator<Real>& block, const Real& energy) {
    if (block.coupling.kind != CouplingKind::RealBarrier)
        throw InvalidArgument("Sturm counting requires a real barrier (all off-diagonal products >= 0)");
    return characteristic_with_derivative(block, energy).sign_changes;
}

// D together with the first and mixed second derivatives in the energy e
// and the barrier magnitude; all share the scale 2^exponent2.
template <class Real>
struct CharacteristicJet {
    Real value{};
    Real d_energy{};
    Real d_coupling{};
    Real d_energy2{};
    Real d_energy_coupling{};
    long exponent2 = 0;
};

template <class Real>
CharacteristicJet<Real> characteristic_jet(const BlockOperator<Real>& block, const Real& energy) {
    // Rows: value, d/de, d/dg, d2/de2, d2/dedg; columns k-2 and k-1.
    Real s[10] = {Real(0), Real(1), Real(0), Real(0), Real(0), Real(0), Real(0), Real(0), Real(0), Real(0)};
    long exponent2 = 0;
    for (std::size_t k = 0; k < block.dimension(); ++k) {
        const Real a = block.diag[k] - energy;
        const Real& p = block.offprod[k];
        const Real dp = block.offprod_derivative(k);
        const Real d = a * s[1] - p * s[0];
        const Real de = -s[1] + a * s[3] - p * s[2];
        const Real dg = a * s[5] - dp * s[0] - p * s[4];
        const Real dee = -2 * s[3] + a * s[7] - p * s[6];
        const Real deg = -s[5] + a * s[9] - dp * s[2] - p * s[8];
        s[0] = s[1], s[1] = d;
        s[2] = s[3], s[3] = de;
        s[4] = s[5], s[5] = dg;
        s[6] = s[7], s[7] = dee;
        s[8] = s[9], s[9] = deg;
        detail::rescale(s, exponent2);
    }
    return {s[1], s[3], s[5], s[7], s[9], exponent2};
}

}  // namespace c3rotor
