#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace permfield {

/// Exact rational num/den with den >= 1; used for torus points.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator);

    double to_double() const;
    /// Representative of the same torus point with 0 <= num < den.
    Rational reduced_mod_one() const;
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// A torus point given either exactly or as a float.
using TorusPoint = std::variant<Rational, double>;

/// "p/q" or a bare integer parse as Rational; anything else as a float.
/// Throws std::invalid_argument on malformed input.
TorusPoint parse_torus_point(const std::string& text);

/// Parses "p/q" or an integer; throws std::invalid_argument otherwise.
Rational parse_rational(const std::string& text);

double to_double(const TorusPoint& point);

/// (a mod m) in [0, m) for m >= 1.
inline __int128 mod_floor(__int128 a, __int128 m) {
    __int128 r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace permfield
