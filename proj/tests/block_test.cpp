#include "c3rotor/block.hpp"
#include "c3rotor/characteristic.hpp"
#include "c3rotor/errors.hpp"
#include "c3rotor/field.hpp"
#include "c3rotor/spectrum.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

using namespace c3rotor;

TEST_CASE("A+ block carries the sqrt(2) coupling of the constant cosine") {
    const auto b = build_block(SymmetrySpecies::APlus, real_barrier(1.0), 3);
    CHECK(b.diag == std::vector<double>{0, 9, 36, 81});
    REQUIRE(b.offprod.size() == 4);
    CHECK(b.offprod[0] == 0);
    CHECK(b.offprod[1] == 0.5);
    CHECK(b.offprod[2] == 0.25);
    CHECK(b.offprod[3] == 0.25);
}

TEST_CASE("A- block with imaginary barrier has negative products") {
    const auto b = build_block(SymmetrySpecies::AMinus, imaginary_barrier(2.0), 3);
    CHECK(b.diag == std::vector<double>{9, 36, 81});
    CHECK(b.offprod[1] == -1.0);
    CHECK(b.offprod[2] == -1.0);
}

TEST_CASE("EA diagonal runs over m = -N..N with s = -1") {
    const auto b = build_block(SymmetrySpecies::EA, real_barrier(0.0), 2);
    CHECK(b.diag == std::vector<double>{49, 16, 1, 4, 25});
    CHECK(std::all_of(b.offprod.begin(), b.offprod.end(), [](double p) { return p == 0; }));
    CHECK(unperturbed_energy(SymmetrySpecies::EA, 2, 0) == 49);
    CHECK(unperturbed_energy(SymmetrySpecies::EB, 2, 4) == 49);
}

TEST_CASE("truncation and coupling validation") {
    CHECK_THROWS_AS(build_block(SymmetrySpecies::EA, real_barrier(1.0), 1), InvalidArgument);
    CHECK_THROWS_AS(build_block(SymmetrySpecies::APlus, real_barrier(1.0), 0), InvalidArgument);
    CHECK_THROWS_AS(build_block(SymmetrySpecies::APlus, real_barrier(std::numeric_limits<double>::quiet_NaN()), 4),
                    InvalidArgument);
    CHECK_THROWS_AS(build_block(SymmetrySpecies::APlus, imaginary_barrier(HUGE_VAL), 4), InvalidArgument);
    CHECK_NOTHROW(build_block(SymmetrySpecies::RawA, real_barrier(1.0), 2));
}

TEST_CASE("build_block is deterministic and instantiated for the extended field") {
    const auto a = build_block(SymmetrySpecies::RawA, real_barrier(0.37), 9);
    const auto b = build_block(SymmetrySpecies::RawA, real_barrier(0.37), 9);
    CHECK(a.diag == b.diag);
    CHECK(a.offprod == b.offprod);
    const auto x = build_block(SymmetrySpecies::APlus, real_barrier(Extended(1)), 3);
    CHECK(x.offprod[1] == Extended("0.5"));
}

TEST_CASE("EA and EB blocks share diagonal multiset and products") {
    for (double lambda : {0.0, 0.3, 7.5}) {
        const auto ea = build_block(SymmetrySpecies::EA, real_barrier(lambda), 6);
        const auto eb = build_block(SymmetrySpecies::EB, real_barrier(lambda), 6);
        auto da = ea.diag, db = eb.diag;
        std::sort(da.begin(), da.end());
        std::sort(db.begin(), db.end());
        CHECK(da == db);
        CHECK(ea.offprod == eb.offprod);
    }
}

TEST_CASE("zero-coupling spectra are the diagonal, exactly") {
    for (auto sp : {SymmetrySpecies::APlus, SymmetrySpecies::AMinus, SymmetrySpecies::EA, SymmetrySpecies::EB,
                    SymmetrySpecies::RawA}) {
        const auto b = build_block(sp, real_barrier(0.0), 6);
        auto d = b.diag;
        std::sort(d.begin(), d.end());
        const auto s = block_eigenvalues(b, 5, 1e-12);
        for (int j = 0; j < 5; ++j) CHECK(s[j] == d[j]);
        for (double v : d) CHECK(characteristic(b, v).mantissa == 0);
    }
}

TEST_CASE("species names round-trip") {
    for (auto sp : {SymmetrySpecies::APlus, SymmetrySpecies::AMinus, SymmetrySpecies::EA, SymmetrySpecies::EB,
                    SymmetrySpecies::RawA})
        CHECK(parse_species(species_name(sp)) == sp);
    CHECK(parse_species("aplus") == SymmetrySpecies::APlus);
    CHECK(parse_species("A2") == SymmetrySpecies::AMinus);
    CHECK_THROWS_AS(parse_species("B"), InvalidArgument);
}

TEST_CASE("potential values") {
    const double pi = std::numbers::pi;
    CHECK(potential_value(real_barrier(2.0), 0).real() == doctest::Approx(2));
    CHECK(potential_value(real_barrier(2.0), pi / 3).real() == doctest::Approx(-2));
    CHECK(potential_value(real_barrier(1.0), 2 * pi / 3).real() == doctest::Approx(1));
    CHECK(potential_value(imaginary_barrier(1.5), 0) == std::complex<double>(0, 1.5));
}

TEST_CASE("potential has C3 periodicity and C6 antisymmetry") {
    const double pi = std::numbers::pi;
    for (const auto& c : {real_barrier(1.3), imaginary_barrier(0.7)}) {
        for (int i = 0; i < 200; ++i) {
            const double phi = -4.0 + 0.04 * i;
            CHECK(std::abs(potential_value(c, phi + 2 * pi / 3) - potential_value(c, phi)) < 1e-12);
            CHECK(std::abs(potential_value(c, phi + pi / 3) + potential_value(c, phi)) < 1e-12);
        }
    }
}
