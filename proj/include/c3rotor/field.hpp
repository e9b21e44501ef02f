#pragma once

// Numeric fields the kernels are instantiated for.
//
// Every solver template is explicitly instantiated for `double` and for
// `Extended`, a 50-decimal-digit software float. Callers that need more
// than machine precision (quasi-degenerate splittings, exceptional points)
// select `Extended`.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

namespace c3rotor {

using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;

template <class Real>
inline constexpr int field_digits = std::numeric_limits<Real>::digits10;

template <class Real>
Real unit_roundoff() {
    return std::numeric_limits<Real>::epsilon();
}

// Largest number of significant digits a caller may request from `Real`
// while keeping a few guard digits.
template <class Real>
constexpr int max_requested_digits() {
    if constexpr (std::is_same_v<Real, double>) {
        return 12;
    } else {
        return field_digits<Real> - 5;
    }
}

template <class Real>
Real parse_real(const std::string& text) {
    if constexpr (std::is_same_v<Real, double>) {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters in number: " + text);
        return v;
    } else {
        return Real(text);
    }
}

// Decimal rendering with `digits` significant digits.
template <class Real>
std::string to_string(const Real& value, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << value;
    return os.str();
}

template <class Real>
double to_double(const Real& value) {
    if constexpr (std::is_same_v<Real, double>) {
        return value;
    } else {
        return value.template convert_to<double>();
    }
}

}  // namespace c3rotor
