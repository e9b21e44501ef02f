#include "c3rotor/st_symmetry.hpp"

#include "c3rotor/characteristic.hpp"
#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace c3rotor {

namespace {

template <class Real>
bool finite(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::isfinite(x);
    } else {
        return boost::multiprecision::isfinite(x);
    }
}

template <class Real>
std::vector<Real> sorted_diag(const BlockOperator<Real>& block) {
    std::vector<Real> d = block.diag;
    std::sort(d.begin(), d.end());
    return d;
}

template <class Real>
struct Sample {
    Real x;
    int sign_value;
    int sign_derivative;
};

template <class Real>
Sample<Real> sample(const BlockOperator<Real>& block, const Real& x) {
    const auto p = characteristic_with_derivative(block, x);
    return {x, detail::sign_of(p.value), detail::sign_of(p.derivative)};
}

// Safeguarded Newton on D inside [a, b], where D changes sign.
template <class Real>
SpectrumEntry<Real> refine_root(const BlockOperator<Real>& block, Real a, Real b, int sign_a, const Real& tol,
                                int max_steps) {
    using std::abs;
    Real x = (a + b) / 2;
    Real step = b - a;
    for (int it = 0;; ++it) {
        if (it > max_steps) throw NumericalFailure("real root refinement did not converge");
        const auto p = characteristic_with_derivative(block, x);
        if (p.value == 0) {
            step = 0;
            break;
        }
        if (detail::sign_of(p.value) == sign_a) {
            a = x;
        } else {
            b = x;
        }
        const Real floor = 8 * unit_roundoff<Real>() * (1 + abs(x));
        if (p.derivative != 0) {
            step = p.value / p.derivative;
            const Real next = x - step;
            if (abs(step) < tol / 4 || abs(step) <= floor / 8) {
                if (next >= a && next <= b) x = next;
                break;
            }
            if (next > a && next < b) {
                x = next;
                continue;
            }
        }
        const Real mid = (a + b) / 2;
        step = x - mid;
        x = mid;
        if (b - a < tol / 2 || b - a <= floor) break;
    }
    SpectrumEntry<Real> e;
    e.species = block.species;
    e.value = x;
    e.residual = abs(step);
    return e;
}

// Point in (a, b) where D' changes sign, by bisection.
template <class Real>
Sample<Real> locate_extremum(const BlockOperator<Real>& block, Sample<Real> a, Sample<Real> b, const Real& tol,
                             int max_steps) {
    for (int it = 0; it < max_steps && b.x - a.x > tol / 4; ++it) {
        const auto mid = sample(block, (a.x + b.x) / 2);
        if (mid.sign_derivative == a.sign_derivative) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return sample(block, (a.x + b.x) / 2);
}

}  // namespace

int st_truncation(int count, double g) {
    return initial_truncation(count, g) + 10;
}

template <class Real>
Spectrum<Real> real_spectrum_st(SymmetrySpecies species, const Real& g, int count, const Real& tol,
                                std::optional<int> truncation, const ScanOptions& options) {
    using std::abs;
    using std::min;
    if (count < 1) throw InvalidArgument("level count must be >= 1");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    if (!finite(g)) throw InvalidArgument("g must be finite");

    const int n = truncation ? *truncation : st_truncation(count, to_double(abs(g)));
    const auto block = build_block(species, imaginary_barrier(g), n);
    const auto levels = sorted_diag(block);
    if (static_cast<std::size_t>(count) >= levels.size())
        throw InvalidArgument("truncation too small for the requested level count");

    Spectrum<Real> out;
    out.truncation_used = n;
    if (g == 0) {
        for (int j = 0; j < count; ++j) out.entries.push_back({species, j, levels[static_cast<std::size_t>(j)], Real(0)});
        return out;
    }

    Real min_gap = 1;
    for (int j = 0; j < count; ++j) {
        const Real gap = levels[static_cast<std::size_t>(j) + 1] - levels[static_cast<std::size_t>(j)];
        if (gap > 0) min_gap = min(min_gap, gap);
    }
    const Real h = min_gap / 8;
    const Real lo = levels.front() - h;
    const Real hi = options.upper_energy
                        ? Real(*options.upper_energy)
                        : (levels[static_cast<std::size_t>(count) - 1] + levels[static_cast<std::size_t>(count)]) / 2;

    std::vector<SpectrumEntry<Real>> roots;
    auto previous = sample(block, lo);
    const long steps = static_cast<long>(to_double((hi - lo) / h)) + 1;
    for (long i = 1; i <= steps; ++i) {
        const Real x = i == steps ? hi : lo + Real(i) * h;
        auto current = sample(block, x);
        if (current.sign_value == 0) {
            roots.push_back({species, 0, x, Real(0)});
            current.sign_value = -previous.sign_value;
        } else if (current.sign_value != previous.sign_value) {
            roots.push_back(refine_root(block, previous.x, current.x, previous.sign_value, tol, options.max_refinements));
        } else if (previous.sign_value * previous.sign_derivative < 0 && current.sign_value * current.sign_derivative > 0) {
            // |D| dips inside the interval: either a close pair of real
            // roots or a complex pair whose real part lies here.
            const auto valley = locate_extremum(block, previous, current, tol, options.max_refinements);
            if (valley.sign_value == 0) {
                roots.push_back({species, 0, valley.x, Real(0)});
                roots.push_back({species, 0, valley.x, Real(0)});
            } else if (valley.sign_value != previous.sign_value) {
                roots.push_back(refine_root(block, previous.x, valley.x, previous.sign_value, tol, options.max_refinements));
                roots.push_back(refine_root(block, valley.x, current.x, valley.sign_value, tol, options.max_refinements));
            }
        }
        previous = current;
    }

    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    if (roots.size() > static_cast<std::size_t>(count)) roots.resize(static_cast<std::size_t>(count));
    for (std::size_t j = 0; j < roots.size(); ++j) roots[j].level = static_cast<int>(j);
    out.entries = std::move(roots);
    return out;
}

std::vector<EpSeed> ep_scan(SymmetrySpecies species, double g_min, double g_max, double g_step, int count) {
    if (!(g_min >= 0 && g_max > g_min && g_max <= 100))
        throw InvalidArgument("scan range must lie within [0, 100] with g_min < g_max");
    if (!(g_step > 0)) throw InvalidArgument("scan step must be positive");
    if (count < 2) throw InvalidArgument("need at least two tracked levels");

    const auto levels = sorted_diag(build_block(species, imaginary_barrier(0.0), st_truncation(count, g_max)));
    const double tol = 1e-10;

    std::vector<EpSeed> seeds;
    std::vector<int> labels;
    std::vector<double> previous;
    std::vector<std::vector<double>> gap_history;  // per tracked pair, last two samples
    int next_label = 0;
    double g_previous = g_min;

    const long samples = static_cast<long>(std::floor((g_max - g_min) / g_step + 1e-9));
    for (long i = 0; i <= samples; ++i) {
        const double g = g_min + static_cast<double>(i) * g_step;
        const auto current = real_spectrum_st<double>(species, g, count, tol, st_truncation(count, g_max)).values();

        if (i == 0) {
            for (std::size_t j = 0; j < current.size(); ++j) labels.push_back(next_label++);
        } else if (current.size() + 2 <= previous.size()) {
            // Drop the adjacent pair whose removal best explains the new list.
            std::size_t best = 0;
            double best_err = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j + 1 < previous.size(); ++j) {
                std::vector<double> kept;
                for (std::size_t q = 0; q < previous.size(); ++q)
                    if (q != j && q != j + 1) kept.push_back(previous[q]);
                double err = 0;
                for (std::size_t q = 0; q < std::min(kept.size(), current.size()); ++q)
                    err = std::max(err, std::abs(kept[q] - current[q]));
                if (err < best_err) {
                    best_err = err;
                    best = j;
                }
            }
            seeds.push_back({species, 0.5 * (g_previous + g), 0.5 * (previous[best] + previous[best + 1]),
                             {labels[best], labels[best + 1]}});
            labels.erase(labels.begin() + static_cast<long>(best), labels.begin() + static_cast<long>(best) + 2);
            gap_history.clear();
        } else if (current.size() > previous.size()) {
            while (labels.size() < current.size()) labels.push_back(next_label++);
            gap_history.clear();
        }

        if (current.size() == previous.size() || i == 0) {
            gap_history.resize(current.size() > 0 ? current.size() - 1 : 0);
            for (std::size_t j = 0; j + 1 < current.size(); ++j) {
                auto& h = gap_history[j];
                const double gap = current[j + 1] - current[j];
                if (h.size() == 2 && h[1] < h[0] && h[1] < gap) {
                    const double bare = levels[static_cast<std::size_t>(j) + 1] - levels[static_cast<std::size_t>(j)];
                    if (h[1] < 0.05 * bare)
                        seeds.push_back({species, g - g_step, 0.5 * (previous[j] + previous[j + 1]),
                                         {labels[j], labels[j + 1]}});
                }
                h.push_back(gap);
                if (h.size() > 2) h.erase(h.begin());
            }
        }
        previous = current;
        g_previous = g;
    }
    return seeds;
}

template <class Real>
ExceptionalPoint<Real> find_exceptional_point(SymmetrySpecies species, LevelPair pair, const EpSeed& seed,
                                              int precision_digits) {
    using std::abs;
    using std::pow;
    if (precision_digits < 1 || precision_digits > max_requested_digits<Real>())
        throw InvalidArgument("precision_digits must be in [1, " + std::to_string(max_requested_digits<Real>()) +
                              "] for this field");
    if (pair.first < 0 || pair.second <= pair.first) throw InvalidArgument("pair must be (lower, upper) levels");
    if (!(seed.g > 0)) throw InvalidArgument("seed g must be positive");

    using std::max;
    const Real step_tol = max<Real>(pow(Real(10), -(precision_digits + 3)), 16 * unit_roundoff<Real>());
    const Real stable_tol = max<Real>(pow(Real(10), -(precision_digits + 1)), 1024 * unit_roundoff<Real>());
    const Real singular = pow(Real(10), -(field_digits<Real> / 2));

    struct Solution {
        Real energy;
        Real g;
        CharacteristicJet<Real> jet;
    };

    auto newton = [&](int truncation, Real energy, Real g) -> Solution {
        for (int it = 0; it < 100; ++it) {
            const auto block = build_block(species, imaginary_barrier(g), truncation);
            const auto jet = characteristic_jet(block, energy);
            const Real det = jet.d_energy * jet.d_energy_coupling - jet.d_coupling * jet.d_energy2;
            const Real scale = abs(jet.d_energy * jet.d_energy_coupling) + abs(jet.d_coupling * jet.d_energy2);
            if (scale == 0 || abs(det) < singular * scale)
                throw NumericalFailure("exceptional-point Jacobian is near-singular (higher-order degeneracy?)");
            const Real de = (jet.value * jet.d_energy_coupling - jet.d_coupling * jet.d_energy) / det;
            const Real dg = (jet.d_energy * jet.d_energy - jet.d_energy2 * jet.value) / det;
            energy -= de;
            g -= dg;
            if (!finite(energy) || !finite(g) || abs(g) > 1000)
                throw NumericalFailure("exceptional-point Newton iteration diverged; try a closer seed");
            if (abs(de) < step_tol * max(Real(1), abs(energy)) && abs(dg) < step_tol * max(Real(1), abs(g))) {
                const auto final_block = build_block(species, imaginary_barrier(g), truncation);
                return {energy, g, characteristic_jet(final_block, energy)};
            }
        }
        throw NumericalFailure("exceptional-point Newton iteration did not converge; try a closer seed");
    };

    int truncation = st_truncation(pair.second + 1, seed.g);
    auto current = newton(truncation, Real(seed.energy), Real(seed.g));
    for (;;) {
        if (truncation > 400) throw NumericalFailure("exceptional point did not stabilize in the truncation");
        truncation += 5;
        auto next = newton(truncation, current.energy, current.g);
        const bool stable = abs(next.g - current.g) < stable_tol * abs(next.g) &&
                            abs(next.energy - current.energy) < stable_tol * max(Real(1), abs(next.energy));
        current = std::move(next);
        if (stable) break;
    }

    ExceptionalPoint<Real> ep;
    ep.species = species;
    ep.pair = pair;
    ep.g = abs(current.g);
    ep.energy = current.energy;
    ep.residual_value = abs(current.jet.value / current.jet.d_energy2);
    ep.residual_derivative = abs(current.jet.d_energy / current.jet.d_energy2);
    ep.precision_digits = precision_digits;
    ep.truncation = truncation;
    return ep;
}

template <class Real>
ExceptionalPoint<double> to_double_ep(const ExceptionalPoint<Real>& ep) {
    ExceptionalPoint<double> out;
    out.species = ep.species;
    out.pair = ep.pair;
    out.g = to_double(ep.g);
    out.energy = to_double(ep.energy);
    out.residual_value = to_double(ep.residual_value);
    out.residual_derivative = to_double(ep.residual_derivative);
    out.precision_digits = std::min(ep.precision_digits, 15);
    out.truncation = ep.truncation;
    return out;
}

ComplexPair complex_pair_continuation(SymmetrySpecies species, const ExceptionalPoint<double>& ep, double g) {
    using cplx = std::complex<double>;
    if (!(g >= ep.g)) throw InvalidArgument("continuation needs g >= g_e");
    if (g == ep.g) return {g, cplx(ep.energy, 0.0)};

    const auto at_ep = characteristic_jet(build_block(species, imaginary_barrier(ep.g), ep.truncation), ep.energy);
    // Near the branch point D ~ D_ee (e - e_e)^2 / 2 + D_g (g - g_e).
    const double curvature = -2.0 * at_ep.d_coupling / at_ep.d_energy2;
    if (!(curvature < 0)) throw NumericalFailure("pair does not turn complex for g > g_e at this point");
    auto model = [&](double gg) { return cplx(ep.energy, std::sqrt(-curvature * (gg - ep.g))); };

    auto newton = [&](const BlockOperator<double>& block, cplx z) {
        double previous_step = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 100; ++it) {
            const auto p = characteristic_with_derivative(block, z);
            if (p.value == cplx(0.0, 0.0)) return z;
            if (p.derivative == cplx(0.0, 0.0)) throw NumericalFailure("complex Newton hit a stationary point");
            const cplx step = p.value / p.derivative;
            z -= step;
            const double size = std::abs(step);
            const double scale = std::max(1.0, std::abs(z));
            // Near the branch point rounding noise in D limits the last digits.
            if (size < 1e-14 * scale || (it > 4 && size >= 0.5 * previous_step && size < 1e-9 * scale)) return z;
            previous_step = size;
        }
        throw NumericalFailure("complex Newton did not converge");
    };

    // e(g) is analytic in u = sqrt(g - g_e) near the branch point, so the
    // path is uniform in u and the predictor extrapolates linearly in u.
    const double u_target = std::sqrt(g - ep.g);
    const int steps = std::max(24, static_cast<int>(std::ceil(u_target / 0.05)));
    cplx before = model(ep.g);
    cplx z = before;
    for (int s = 1; s <= steps; ++s) {
        const double u = u_target * static_cast<double>(s) / steps;
        const double gg = ep.g + u * u;
        const cplx predicted = s == 1 ? model(gg) : 2.0 * z - before;
        const cplx root = newton(build_block(species, imaginary_barrier(gg), ep.truncation), predicted);
        const double stride = std::abs(predicted - z);
        if (root.imag() <= 0 || std::abs(root - predicted) > 0.25 * stride + 1e-9)
            throw NumericalFailure("lost the complex branch during continuation");
        before = z;
        z = root;
    }
    return {g, z};
}

std::vector<std::complex<double>> dense_complex_spectrum(SymmetrySpecies species, double g, int truncation) {
    const auto block = build_block(species, imaginary_barrier(g), truncation);
    const auto m = static_cast<Eigen::Index>(block.dimension());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) h(i, i) = block.diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < m; ++i) {
        // element i g w with w^2 = |offprod| / g^2
        const double element = std::sqrt(-block.offprod[static_cast<std::size_t>(i)]);
        h(i, i - 1) = h(i - 1, i) = std::complex<double>(0.0, g >= 0 ? element : -element);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("dense complex eigensolve failed");
    std::vector<std::complex<double>> out(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

template Spectrum<double> real_spectrum_st(SymmetrySpecies, const double&, int, const double&, std::optional<int>,
                                           const ScanOptions&);
template Spectrum<Extended> real_spectrum_st(SymmetrySpecies, const Extended&, int, const Extended&,
                                             std::optional<int>, const ScanOptions&);
template ExceptionalPoint<double> find_exceptional_point(SymmetrySpecies, LevelPair, const EpSeed&, int);
template ExceptionalPoint<Extended> find_exceptional_point(SymmetrySpecies, LevelPair, const EpSeed&, int);
template ExceptionalPoint<double> to_double_ep(const ExceptionalPoint<double>&);
template ExceptionalPoint<double> to_double_ep(const ExceptionalPoint<Extended>&);

}  // namespace c3rotor
