#include "c3rotor/spectrum.hpp"

#include "c3rotor/characteristic.hpp"
#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace c3rotor {

template <class Real>
std::vector<Real> Spectrum<Real>::values() const {
    std::vector<Real> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.value);
    return out;
}

namespace {

template <class Real>
struct Bounds {
    Real lo;
    Real hi;
};

template <class Real>
Bounds<Real> gershgorin(const BlockOperator<Real>& block) {
    using std::sqrt;
    using std::abs;
    const std::size_t m = block.dimension();
    Real lo = block.diag[0];
    Real hi = block.diag[0];
    for (std::size_t i = 0; i < m; ++i) {
        Real radius = 0;
        if (i > 0) radius += sqrt(abs(block.offprod[i]));
        if (i + 1 < m) radius += sqrt(abs(block.offprod[i + 1]));
        lo = std::min<Real>(lo, block.diag[i] - radius);
        hi = std::max<Real>(hi, block.diag[i] + radius);
    }
    const Real pad = 1 + (hi - lo) / 1024;
    return {lo - pad, hi + pad};
}

template <class Real>
Real resolvable_tolerance(const Real& value) {
    using std::abs;
    return 2 * unit_roundoff<Real>() * std::max<Real>(Real(1), abs(value));
}

// One root with count_below(a) == index and count_below(b) == index + 1.
template <class Real>
SpectrumEntry<Real> isolate_and_polish(const BlockOperator<Real>& block, int index, Bounds<Real> range,
                                       Real tol, bool clamp_tol, const SolverLimits& limits) {
    using std::abs;
    Real a = range.lo;
    Real b = range.hi;
    int count_a = 0;
    int count_b = static_cast<int>(block.dimension());

    int steps = 0;
    for (;;) {
        if (count_a == index && count_b == index + 1) break;
        // Roots closer than the field can separate: report the cluster midpoint.
        if (b - a <= resolvable_tolerance<Real>(b)) break;
        if (++steps > limits.max_bisection_steps)
            throw NumericalFailure("bisection did not isolate eigenvalue " + std::to_string(index));
        const Real mid = (a + b) / 2;
        const int c = count_below(block, mid);
        if (c <= index) {
            a = mid;
            count_a = c;
        } else {
            b = mid;
            count_b = c;
        }
    }

    const Real floor = resolvable_tolerance<Real>((a + b) / 2);
    if (tol < floor) {
        if (!clamp_tol)
            throw NumericalFailure("tolerance " + to_string(tol, 3) + " unreachable at this precision (floor " +
                                   to_string(floor, 3) + ")");
        tol = floor;
    }

    if (count_a != index || count_b != index + 1) {
        // unresolvable cluster: its midpoint is within one floor of each member
        SpectrumEntry<Real> entry;
        entry.species = block.species;
        entry.level = index;
        entry.value = (a + b) / 2;
        entry.residual = b - a;
        return entry;
    }
    const int sign_a = detail::sign_of(characteristic_with_derivative(block, a).value);
    Real x = (a + b) / 2;
    Real step = b - a;
    Real previous_step = step;
    // Newton is dropped once its steps stop halving: the iterates are then
    // inside the rounding band of D (wide near a close pair), while the sign
    // of D, like the Sturm count, stays backward stable and bisection keeps
    // converging.
    bool use_newton = true;
    const int budget = limits.max_newton_steps + limits.max_bisection_steps;
    for (int it = 0;; ++it) {
        if (it > budget)
            throw NumericalFailure("Newton polish did not converge for eigenvalue " + std::to_string(index));
        const auto pair = characteristic_with_derivative(block, x);
        if (pair.value == 0) {
            step = 0;
            break;
        }
        if (detail::sign_of(pair.value) == sign_a) {
            a = x;
        } else {
            b = x;
        }
        // The floor is re-evaluated at the iterate: the isolation bracket
        // may have been centred far from the root.
        const Real local_floor = resolvable_tolerance<Real>(x);
        if (b - a < std::max<Real>(tol / 2, local_floor)) {
            step = b - a;
            x = (a + b) / 2;
            break;
        }
        if (use_newton && pair.derivative != 0) {
            step = pair.value / pair.derivative;
            const Real next = x - step;
            if (abs(step) < tol / 4 || abs(step) <= local_floor / 8) {
                if (next >= a && next <= b) x = next;
                break;
            }
            if (it > 0 && abs(step) > previous_step / 2 && abs(step) < 1e-6 * std::max<Real>(Real(1), abs(x)))
                use_newton = false;
            previous_step = abs(step);
            if (use_newton && next > a && next < b) {
                x = next;
                continue;
            }
        }
        const Real mid = (a + b) / 2;
        step = x - mid;
        x = mid;
    }
    if (!clamp_tol && tol < resolvable_tolerance<Real>(x))
        throw NumericalFailure("tolerance " + to_string(tol, 3) + " unreachable at this precision (floor " +
                               to_string(resolvable_tolerance<Real>(x), 3) + ")");
    SpectrumEntry<Real> entry;
    entry.species = block.species;
    entry.level = index;
    entry.value = x;
    entry.residual = abs(step);
    return entry;
}

template <class Real>
Spectrum<Real> eigenvalues_impl(const BlockOperator<Real>& block, int count, const Real& tol, bool clamp_tol,
                                const SolverLimits& limits) {
    if (block.coupling.kind != CouplingKind::RealBarrier)
        throw InvalidArgument("Sturm-bisection solver requires a real barrier");
    if (count < 1) throw InvalidArgument("level count must be >= 1");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    if (static_cast<std::size_t>(count) > block.dimension())
        throw InvalidArgument("requested " + std::to_string(count) + " levels from a block of dimension " +
                              std::to_string(block.dimension()));
    Spectrum<Real> out;
    out.truncation_used = block.truncation;
    if (std::all_of(block.offprod.begin(), block.offprod.end(), [](const Real& p) { return p == 0; })) {
        std::vector<Real> sorted = block.diag;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 0; j < count; ++j) out.entries.push_back({block.species, j, sorted[static_cast<std::size_t>(j)], Real(0)});
        return out;
    }
    const auto range = gershgorin(block);
    for (int j = 0; j < count; ++j) out.entries.push_back(isolate_and_polish(block, j, range, tol, clamp_tol, limits));
    return out;
}


}  // namespace

int initial_truncation(int count, double magnitude) {
    return count + static_cast<int>(std::ceil(2.0 * std::sqrt(std::abs(magnitude)))) + 8;
}

template <class Real>
Spectrum<Real> block_eigenvalues(const BlockOperator<Real>& block, int count, const Real& tol,
                                 const SolverLimits& limits) {
    return eigenvalues_impl(block, count, tol, false, limits);
}

template <class Real>
int auto_truncation(SymmetrySpecies species, const Coupling<Real>& coupling, int count, const Real& tol,
                    const SolverLimits& limits) {
    using std::abs;
    if (count < 1) throw InvalidArgument("level count must be >= 1");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    const Real inner_tol = tol / 100;
    int n = initial_truncation(count, to_double(coupling.magnitude));
    auto current = eigenvalues_impl(build_block(species, coupling, n), count, inner_tol, true, limits);
    while (n <= limits.truncation_cap) {
        const int next_n = n + limits.truncation_increment;
        auto next = eigenvalues_impl(build_block(species, coupling, next_n), count, inner_tol, true, limits);
        Real moved = 0;
        for (int j = 0; j < count; ++j) moved = std::max<Real>(moved, abs(next[j] - current[j]));
        if (moved < tol / 10) return n;
        n = next_n;
        current = std::move(next);
    }
    throw NumericalFailure("truncation did not converge below N = " + std::to_string(limits.truncation_cap));
}

template <class Real>
Spectrum<Real> solve_spectrum(SymmetrySpecies species, const Coupling<Real>& coupling, int count, const Real& tol,
                              std::optional<int> truncation, const SolverLimits& limits) {
    if (coupling.kind != CouplingKind::RealBarrier)
        throw InvalidArgument("solve_spectrum handles real barriers; use real_spectrum_st for i g");
    const int n = truncation ? *truncation : auto_truncation(species, coupling, count, tol, limits);
    return block_eigenvalues(build_block(species, coupling, n), count, tol, limits);
}

template <class Real>
Real tunneling_splitting(int n, const Real& lambda, const Real& tol) {
    using std::abs;
    if (n < 1) throw InvalidArgument("splitting index n must be >= 1");
    if (lambda == 0) throw InvalidArgument("splitting requires a nonzero barrier");
    const auto coupling = real_barrier(lambda);
    const auto odd = solve_spectrum(SymmetrySpecies::AMinus, coupling, n, tol);
    const auto even = solve_spectrum(SymmetrySpecies::APlus, coupling, n + 1, tol);
    return abs(odd[static_cast<std::size_t>(n) - 1] - even[static_cast<std::size_t>(n)]);
}

namespace {

template <class Scalar>
std::vector<double> tridiagonal_ql(const BlockOperator<double>& block) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const auto m = static_cast<Eigen::Index>(block.dimension());
    Vector diag(m);
    Vector sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) diag(i) = block.diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < m; ++i)
        sub(i - 1) = std::sqrt(static_cast<Scalar>(block.offprod[static_cast<std::size_t>(i)]));
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return {};
    std::vector<double> out(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(solver.eigenvalues()(i));
    return out;
}

}  // namespace

Spectrum<double> dense_oracle(const BlockOperator<double>& block, int count) {
    if (block.coupling.kind != CouplingKind::RealBarrier)
        throw InvalidArgument("dense oracle covers the Hermitian (real barrier) case only");
    const auto m = static_cast<Eigen::Index>(block.dimension());
    if (m > 5000) throw InvalidArgument("dense oracle limited to dimension 5000");
    if (count < 1 || count > m) throw InvalidArgument("invalid level count for dense oracle");

    // Long double keeps the QL rounding (about eps * max|d|, large for wide
    // blocks) well below the double-precision results being checked. Its
    // fixed iteration budget occasionally runs out; double is the fallback.
    std::vector<double> eigenvalues = tridiagonal_ql<long double>(block);
    if (eigenvalues.empty()) eigenvalues = tridiagonal_ql<double>(block);
    if (eigenvalues.empty()) throw NumericalFailure("dense tridiagonal QL failed");

    Spectrum<double> out;
    out.truncation_used = block.truncation;
    for (int j = 0; j < count; ++j) out.entries.push_back({block.species, j, eigenvalues[static_cast<std::size_t>(j)], 0.0});
    return out;
}

#define C3ROTOR_INSTANTIATE(Real)                                                                              \
    template struct Spectrum<Real>;                                                                            \
    template Spectrum<Real> block_eigenvalues(const BlockOperator<Real>&, int, const Real&, const SolverLimits&); \
    template int auto_truncation(SymmetrySpecies, const Coupling<Real>&, int, const Real&, const SolverLimits&); \
    template Spectrum<Real> solve_spectrum(SymmetrySpecies, const Coupling<Real>&, int, const Real&,            \
                                           std::optional<int>, const SolverLimits&);                          \
    template Real tunneling_splitting(int, const Real&, const Real&);

C3ROTOR_INSTANTIATE(double)
C3ROTOR_INSTANTIATE(Extended)

#undef C3ROTOR_INSTANTIATE

}  // namespace c3rotor
