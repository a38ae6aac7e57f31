#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "t5drive/errors.hpp"

namespace t5drive::integrate {

using Vector = Eigen::VectorXd;

enum class Method { Rk4, Euler };

inline std::string_view to_string(Method m) { return m == Method::Rk4 ? "rk4" : "euler"; }

inline Method method_from_string(std::string_view s) {
    if (s == "rk4") {
        return Method::Rk4;
    }
    if (s == "euler") {
        return Method::Euler;
    }
    throw Error(ErrorKind::ValidationError, "integrator must be 'rk4' or 'euler'",
                "simulation.integrator");
}

/// One explicit step of ẋ = f(t, x).
template <typename Rhs>
Vector explicit_step(Method method, Rhs &&f, double t, const Vector &x, double h) {
    if (method == Method::Euler) {
        return x + h * f(t, x);
    }
    const Vector k1 = f(t, x);
    const Vector k2 = f(t + 0.5 * h, Vector(x + 0.5 * h * k1));
    const Vector k3 = f(t + 0.5 * h, Vector(x + 0.5 * h * k2));
    const Vector k4 = f(t + h, Vector(x + h * k3));
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Step that refuses to return a non-finite state. The input state is left
/// untouched on failure; `step_index` is reported in the error.
template <typename Rhs>
Vector checked_step(Method method, Rhs &&f, double t, const Vector &x, double h,
                    std::size_t step_index) {
    Vector next;
    try {
        next = explicit_step(method, f, t, x, h);
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::InvalidParameter) {
            throw;
        }
        throw Error(ErrorKind::NonFiniteState,
                    "state left the valid domain at step " + std::to_string(step_index) +
                        " (" + e.what() + ")");
    }
    if (!next.allFinite()) {
        throw Error(ErrorKind::NonFiniteState,
                    "non-finite state at step " + std::to_string(step_index));
    }
    return next;
}

} // namespace t5drive::integrate
