#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "error.hpp"

namespace qswarm {

inline constexpr double NORM_TOL = 1e-9;
inline constexpr double HERM_TOL = 1e-9;
inline constexpr double TRACE_TOL = 1e-9;
inline constexpr double PSD_TOL = 1e-9;

/// Validation tolerances. Every validating constructor takes one of these;
/// the defaults are the constants above.
struct Tolerances {
    double norm = NORM_TOL;
    double herm = HERM_TOL;
    double trace = TRACE_TOL;
    double psd = PSD_TOL;

    static constexpr Tolerances uniform(double tol) { return {tol, tol, tol, tol}; }
};

/// Reads QSWARM_TOL (a single real applied to the whole bundle). Returns
/// nullopt when the variable is unset; throws on an unparsable or
/// non-positive value.
inline std::optional<Tolerances> tolerances_from_env(const char *var = "QSWARM_TOL") {
    const char *raw = std::getenv(var);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || raw[used] != '\0' || !std::isfinite(v) || v <= 0.0)
        throw ValidationError(std::string(var) + " must be a positive real, got '" + raw + "'");
    return Tolerances::uniform(v);
}

}  // namespace qswarm
