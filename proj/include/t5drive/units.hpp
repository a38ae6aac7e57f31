#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace t5drive {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Angular speed in rad/s from shaft speed in rpm.
constexpr double rpm_to_rad_per_s(double rpm) { return rpm * kPi / 30.0; }

/// Degree value whose conversion back to radians reproduces `rad` exactly.
/// Among the nearby doubles that do, the one with the shortest decimal form
/// wins, so 63.5° is written as 63.5 rather than 63.50000000000001. Files
/// store degrees, so this keeps emit/parse cycles bit-identical and tidy.
inline double rad_to_deg_exact(double rad) {
    const double naive = rad_to_deg(rad);
    if (!std::isfinite(naive)) {
        return naive;
    }
    auto digits = [](double x) {
        std::array<char, 32> buf{};
        return std::to_chars(buf.data(), buf.data() + buf.size(), x).ptr - buf.data();
    };
    double best = deg_to_rad(naive) == rad ? naive : NAN;
    double up = naive;
    double down = naive;
    for (int i = 0; i < 16; ++i) {
        up = std::nextafter(up, INFINITY);
        down = std::nextafter(down, -INFINITY);
        for (double c : {up, down}) {
            if (deg_to_rad(c) == rad && (std::isnan(best) || digits(c) < digits(best))) {
                best = c;
            }
        }
    }
    return std::isnan(best) ? naive : best;
}

} // namespace t5drive
