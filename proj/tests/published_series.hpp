#pragma once

// Coefficients of lambda^0 .. lambda^6 as printed for the lowest A and E
// levels. Level labels follow the combined A ordering; the per-block level
// hosting each line was determined numerically.

#include "c3rotor/block.hpp"

#include <array>

namespace published {

struct SeriesRow {
    const char* label;
    c3rotor::SymmetrySpecies species;
    int level;
    std::array<const char*, 4> coeffs;
};

using c3rotor::SymmetrySpecies;

inline constexpr SeriesRow kSeries[] = {
    {"A 0", SymmetrySpecies::APlus, 0, {"0", "-1/18", "7/23328", "-29/8503056"}},
    {"A 1", SymmetrySpecies::AMinus, 0, {"9", "-1/108", "5/2519424", "-289/293865615360"}},
    {"A 2", SymmetrySpecies::APlus, 1, {"9", "5/108", "-763/2519424", "1002401/293865615360"}},
    {"A 3", SymmetrySpecies::AMinus, 1, {"36", "1/270", "-317/157464000", "10049/10044234900000"}},
    {"A 4", SymmetrySpecies::APlus, 2, {"36", "1/270", "433/157464000", "-5701/10044234900000"}},
    {"A 5", SymmetrySpecies::AMinus, 2, {"81", "1/630", "187/8001504000", "-5861633/342986069260800000"}},
    {"A 6", SymmetrySpecies::APlus, 3, {"81", "1/630", "187/8001504000", "6743617/342986069260800000"}},
    {"E 0", SymmetrySpecies::EA, 0, {"1", "-1/10", "83/32000", "-4581/30800000"}},
    {"E 1", SymmetrySpecies::EA, 1, {"4", "1/14", "-143/54880", "2601/17479280"}},
    {"E 2", SymmetrySpecies::EA, 2, {"16", "1/110", "383/37268000", "-72621/958253450000"}},
    {"E 3", SymmetrySpecies::EA, 3, {"25", "1/182", "563/385828352", "144549/30352923537664"}},
    {"E 4", SymmetrySpecies::EA, 4, {"49", "1/374", "1043/8370179840", "90081/3366013416487040"}},
};

}  // namespace published
