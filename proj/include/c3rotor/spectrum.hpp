#pragma once

#include "c3rotor/block.hpp"

#include <optional>
#include <vector>

namespace c3rotor {

template <class Real>
struct SpectrumEntry {
    SymmetrySpecies species = SymmetrySpecies::APlus;
    int level = 0;
    Real value{};
    // |D / D'| at the returned root: the size of the next Newton step.
    Real residual{};
};

// Lowest eigenvalues of one block, ascending, levels numbered from 0.
template <class Real>
struct Spectrum {
    std::vector<SpectrumEntry<Real>> entries;
    int truncation_used = 0;

    std::size_t size() const { return entries.size(); }
    const Real& operator[](std::size_t i) const { return entries[i].value; }
    std::vector<Real> values() const;
};

struct SolverLimits {
    int max_bisection_steps = 4000;
    int max_newton_steps = 100;
    int truncation_increment = 10;
    int truncation_cap = 2000;
};

// First `count` eigenvalues of a real-barrier block: Sturm bisection
// isolates each root, a bracketed Newton iteration polishes it.
// Throws NumericalFailure when `tol` is below what the field can resolve.
template <class Real>
Spectrum<Real> block_eigenvalues(const BlockOperator<Real>& block, int count, const Real& tol,
                                 const SolverLimits& limits = {});

// Smallest N >= N0 = k + ceil(2 sqrt|magnitude|) + 8 (stepping by
// limits.truncation_increment) for which the lowest k eigenvalues move by
// less than tol/10 when N grows by one increment.
template <class Real>
int auto_truncation(SymmetrySpecies species, const Coupling<Real>& coupling, int count, const Real& tol,
                    const SolverLimits& limits = {});

int initial_truncation(int count, double magnitude);

// Lowest `count` eigenvalues for a real barrier. The truncation is chosen
// by auto_truncation unless `truncation` is given.
template <class Real>
Spectrum<Real> solve_spectrum(SymmetrySpecies species, const Coupling<Real>& coupling, int count, const Real& tol,
                              std::optional<int> truncation = std::nullopt, const SolverLimits& limits = {});

// Tunneling splitting of the n-th quasi-degenerate A pair (9 n^2 at zero
// barrier), |e(A-, n-1) - e(A+, n)|, each member solved in its own parity
// block so the subtraction never involves two nearly equal roots of one
// polynomial.
template <class Real>
Real tunneling_splitting(int n, const Real& lambda, const Real& tol);

// Independent check: dense symmetric-tridiagonal diagonalization (Eigen's
// QL implementation), sharing nothing with the recurrence path.
Spectrum<double> dense_oracle(const BlockOperator<double>& block, int count);

}  // namespace c3rotor
