#include "c3rotor/perturbation.hpp"

#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace c3rotor {

std::string rational_to_string(const Rational& value) {
    return value.str();
}

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw InvalidArgument("malformed rational '" + text + "'");
    }
}

namespace {

// H0 + lambda V with H0 = diag(energies) and V tridiagonal; the block is
// stored similarity-transformed so that V has upper entries 1 and lower
// entries c_k = (off-diagonal element / lambda)^2, keeping every matrix
// element rational (the A+ coupling lambda / sqrt(2) would not be).
struct RationalBlock {
    std::vector<Rational> energies;
    std::vector<Rational> lower;  // lower[k] couples row k to row k-1
};

RationalBlock rational_block(SymmetrySpecies species, int truncation) {
    const auto probe = build_block(species, real_barrier(1.0), truncation);
    RationalBlock b;
    b.energies.reserve(probe.dimension());
    b.lower.assign(probe.dimension(), Rational(1, 4));
    b.lower[0] = 0;
    for (std::size_t k = 0; k < probe.dimension(); ++k)
        b.energies.emplace_back(unperturbed_energy(species, truncation, k));
    if (species == SymmetrySpecies::APlus) b.lower[1] = Rational(1, 2);
    return b;
}

std::vector<Rational> apply_coupling(const RationalBlock& b, const std::vector<Rational>& x) {
    const std::size_t m = x.size();
    std::vector<Rational> y(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (k + 1 < m) y[k] += x[k + 1];
        if (k > 0) y[k] += b.lower[k] * x[k - 1];
    }
    return y;
}

}  // namespace

RationalSeries rs_series(SymmetrySpecies species, int level, int max_order) {
    if (species == SymmetrySpecies::RawA)
        throw InvalidArgument("rawA levels are degenerate in pairs; use the A+ / A- parity blocks");
    if (level < 0) throw InvalidArgument("level must be non-negative");
    if (max_order < 0 || max_order % 2 != 0) throw InvalidArgument("max_order must be a non-negative even integer");
    if (max_order > 40) throw InvalidArgument("max_order above 40 is not supported");

    // Order 2k corrections reach at most k rows away from the target.
    const int truncation = level + max_order / 2 + 2;
    const RationalBlock b = rational_block(species, truncation);
    const std::size_t m = b.energies.size();

    std::vector<std::size_t> by_energy(m);
    std::iota(by_energy.begin(), by_energy.end(), std::size_t{0});
    std::stable_sort(by_energy.begin(), by_energy.end(),
                     [&](std::size_t i, std::size_t j) { return b.energies[i] < b.energies[j]; });
    const std::size_t target = by_energy[static_cast<std::size_t>(level)];
    const Rational e0 = b.energies[target];

    // Intermediate normalization: psi_target = 1 at every order.
    std::vector<std::vector<Rational>> psi{std::vector<Rational>(m)};
    psi[0][target] = 1;
    std::vector<Rational> energy{e0};

    for (int j = 1; j <= max_order; ++j) {
        const auto v_psi = apply_coupling(b, psi[static_cast<std::size_t>(j - 1)]);
        energy.push_back(v_psi[target]);
        std::vector<Rational> next(m);
        for (std::size_t row = 0; row < m; ++row) {
            if (row == target) continue;
            Rational rhs = v_psi[row];
            for (int i = 1; i <= j; ++i)
                rhs -= energy[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(j - i)][row];
            next[row] = rhs / (e0 - b.energies[row]);
        }
        psi.push_back(std::move(next));
        if (j % 2 == 1 && energy.back() != 0)
            throw NumericalFailure("odd-order correction did not vanish; the block is not C6-even");
    }

    RationalSeries out;
    out.species = species;
    out.level = level;
    out.order = max_order;
    for (std::size_t j = 0; j < energy.size(); j += 2) out.coeffs.push_back(energy[j]);
    return out;
}

template <class Real>
Real rational_to_real(const Rational& value) {
    const auto num = boost::multiprecision::numerator(value);
    const auto den = boost::multiprecision::denominator(value);
    if constexpr (std::is_same_v<Real, double>) {
        return value.convert_to<double>();
    } else {
        return Real(num) / Real(den);
    }
}

template <class Real>
SeriesValue<Real> evaluate_series_squared(const RationalSeries& series, const Real& lambda_sq) {
    SeriesValue<Real> out;
    Real power = 1;
    for (const auto& c : series.coeffs) {
        out.last_term = rational_to_real<Real>(c) * power;
        out.value += out.last_term;
        power *= lambda_sq;
    }
    return out;
}

template <class Real>
Real asymptotic_energy(int v, const Real& lambda) {
    using std::sqrt;
    if (v < 0) throw InvalidArgument("oscillator quantum number must be non-negative");
    if (!(lambda > 0)) throw InvalidArgument("asymptotic law needs a positive barrier");
    return -lambda + 3 * sqrt(lambda / 2) * (2 * v + 1);
}

template double rational_to_real<double>(const Rational&);
template Extended rational_to_real<Extended>(const Rational&);
template SeriesValue<double> evaluate_series_squared(const RationalSeries&, const double&);
template SeriesValue<Extended> evaluate_series_squared(const RationalSeries&, const Extended&);
template double asymptotic_energy(int, const double&);
template Extended asymptotic_energy(int, const Extended&);

}  // namespace c3rotor
