#pragma once

// Symmetry-adapted tridiagonal blocks of the C3 hindered rotor
//
//     H = -d^2/dphi^2 + V(phi),   V(phi) = lambda cos(3 phi),
//
// with energies in units of the rotational constant B = hbar^2 / (2 I) and
// lambda = V3 / B. In the Fourier basis exp(i(3m + s)phi) the Hamiltonian
// is tridiagonal with diagonal (3m + s)^2 and off-diagonal lambda / 2.
// Parity splits the s = 0 (A) states further into a cosine block (A+) and
// a sine block (A-).

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace c3rotor {

enum class SymmetrySpecies {
    APlus,   // cos(3 j phi), j >= 0
    AMinus,  // sin(3 j phi), j >= 1
    EA,      // exp(i(3m - 1)phi)
    EB,      // exp(i(3m + 1)phi)
    RawA,    // exp(i 3m phi), both parities together
};

std::string_view species_name(SymmetrySpecies species);

// Accepts the canonical names ("A+", "A-", "EA", "EB", "rawA") plus a few
// spellings ("APlus", "Ea", "A1", ...). Throws InvalidArgument otherwise.
SymmetrySpecies parse_species(std::string_view text);

// Angular offset s of the two-sided blocks; 0 for the parity blocks.
int species_offset(SymmetrySpecies species);

bool is_two_sided(SymmetrySpecies species);

enum class CouplingKind {
    RealBarrier,       // V = lambda cos(3 phi), Hermitian
    ImaginaryBarrier,  // V = i g cos(3 phi), space-time symmetric
};

// Dimensionless barrier strength: lambda for a real barrier, g for an
// imaginary one.
template <class Real>
struct Coupling {
    CouplingKind kind = CouplingKind::RealBarrier;
    Real magnitude{};

    // Square of the complex barrier amplitude: lambda^2 or -g^2.
    Real amplitude_squared() const {
        return kind == CouplingKind::RealBarrier ? magnitude * magnitude : -(magnitude * magnitude);
    }
};

template <class Real>
Coupling<Real> real_barrier(Real lambda) {
    return {CouplingKind::RealBarrier, lambda};
}

template <class Real>
Coupling<Real> imaginary_barrier(Real g) {
    return {CouplingKind::ImaginaryBarrier, g};
}

// Truncated tridiagonal operator of one symmetry block.
//
// Off-diagonal entries are stored only through their products
// offprod[k] = b_k c_k coupling rows k-1 and k (offprod[0] is unused and
// zero), which is all the determinant recursion needs. For an imaginary
// barrier the products are negative and everything stays real.
template <class Real>
struct BlockOperator {
    SymmetrySpecies species = SymmetrySpecies::APlus;
    Coupling<Real> coupling;
    int truncation = 0;
    std::vector<Real> diag;
    std::vector<Real> offprod;

    std::size_t dimension() const { return diag.size(); }

    // d offprod[k] / d magnitude, used by the exceptional-point Newton step.
    Real offprod_derivative(std::size_t k) const;
};

// Builds the block for `species` truncated at |m| <= N (two-sided blocks,
// dimension 2N+1), j <= N (A+, dimension N+1) or 1 <= j <= N (A-,
// dimension N). Throws InvalidArgument for N < 2 or a non-finite coupling.
template <class Real>
BlockOperator<Real> build_block(SymmetrySpecies species, const Coupling<Real>& coupling, int truncation);

// Unperturbed diagonal energy of row `row` (exact integer).
long long unperturbed_energy(SymmetrySpecies species, int truncation, std::size_t row);

// Potential value lambda cos(3 phi) or i g cos(3 phi).
std::complex<double> potential_value(const Coupling<double>& coupling, double phi);

}  // namespace c3rotor
