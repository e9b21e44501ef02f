#include "c3rotor/block.hpp"

#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"

#include <cctype>
#include <cmath>

namespace c3rotor {

std::string_view species_name(SymmetrySpecies species) {
    switch (species) {
        case SymmetrySpecies::APlus: return "A+";
        case SymmetrySpecies::AMinus: return "A-";
        case SymmetrySpecies::EA: return "EA";
        case SymmetrySpecies::EB: return "EB";
        case SymmetrySpecies::RawA: return "rawA";
    }
    return "?";
}

SymmetrySpecies parse_species(std::string_view text) {
    std::string key;
    for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (key == "a+" || key == "aplus" || key == "a1") return SymmetrySpecies::APlus;
    if (key == "a-" || key == "aminus" || key == "a2") return SymmetrySpecies::AMinus;
    if (key == "ea" || key == "e_a" || key == "e-") return SymmetrySpecies::EA;
    if (key == "eb" || key == "e_b" || key == "e+") return SymmetrySpecies::EB;
    if (key == "rawa" || key == "a") return SymmetrySpecies::RawA;
    throw InvalidArgument("unknown symmetry species '" + std::string(text) + "'");
}

int species_offset(SymmetrySpecies species) {
    switch (species) {
        case SymmetrySpecies::EA: return -1;
        case SymmetrySpecies::EB: return 1;
        default: return 0;
    }
}

bool is_two_sided(SymmetrySpecies species) {
    return species == SymmetrySpecies::EA || species == SymmetrySpecies::EB ||
           species == SymmetrySpecies::RawA;
}

long long unperturbed_energy(SymmetrySpecies species, int truncation, std::size_t row) {
    const auto r = static_cast<long long>(row);
    switch (species) {
        case SymmetrySpecies::APlus: return 9 * r * r;
        case SymmetrySpecies::AMinus: return 9 * (r + 1) * (r + 1);
        default: {
            const long long q = 3 * (r - truncation) + species_offset(species);
            return q * q;
        }
    }
}

template <class Real>
Real BlockOperator<Real>::offprod_derivative(std::size_t k) const {
    if (k == 0 || k >= offprod.size()) return Real(0);
    // offprod is c_k * (+-magnitude^2); its derivative is 2 offprod / magnitude.
    const Real two_m = 2 * coupling.magnitude;
    const Real sign = coupling.kind == CouplingKind::RealBarrier ? Real(1) : Real(-1);
    const Real weight = (species == SymmetrySpecies::APlus && k == 1) ? Real(1) / 2 : Real(1) / 4;
    return sign * weight * two_m;
}

template <class Real>
BlockOperator<Real> build_block(SymmetrySpecies species, const Coupling<Real>& coupling, int truncation) {
    using std::isfinite;
    if (truncation < 2) throw InvalidArgument("truncation N must be >= 2");
    if constexpr (std::is_same_v<Real, double>) {
        if (!std::isfinite(coupling.magnitude)) throw InvalidArgument("coupling magnitude must be finite");
    } else {
        if (!boost::multiprecision::isfinite(coupling.magnitude))
            throw InvalidArgument("coupling magnitude must be finite");
    }

    BlockOperator<Real> block;
    block.species = species;
    block.coupling = coupling;
    block.truncation = truncation;

    std::size_t rows = 0;
    switch (species) {
        case SymmetrySpecies::APlus: rows = static_cast<std::size_t>(truncation) + 1; break;
        case SymmetrySpecies::AMinus: rows = static_cast<std::size_t>(truncation); break;
        default: rows = 2 * static_cast<std::size_t>(truncation) + 1; break;
    }

    const Real quarter = coupling.amplitude_squared() / 4;
    block.diag.reserve(rows);
    block.offprod.assign(rows, quarter);
    block.offprod[0] = Real(0);
    for (std::size_t row = 0; row < rows; ++row)
        block.diag.emplace_back(static_cast<double>(unperturbed_energy(species, truncation, row)));
    // The constant function couples to cos(3 phi) with lambda / sqrt(2).
    if (species == SymmetrySpecies::APlus) block.offprod[1] = coupling.amplitude_squared() / 2;
    return block;
}

std::complex<double> potential_value(const Coupling<double>& coupling, double phi) {
    const double v = coupling.magnitude * std::cos(3.0 * phi);
    return coupling.kind == CouplingKind::RealBarrier ? std::complex<double>(v, 0.0)
                                                      : std::complex<double>(0.0, v);
}

template struct BlockOperator<double>;
template struct BlockOperator<Extended>;
template BlockOperator<double> build_block(SymmetrySpecies, const Coupling<double>&, int);
template BlockOperator<Extended> build_block(SymmetrySpecies, const Coupling<Extended>&, int);

}  // namespace c3rotor
