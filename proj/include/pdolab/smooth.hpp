#pragma once

#include <cmath>

namespace pdolab {

/// e(t) = exp(-1/t) for t > 0, else 0.
inline double smooth_ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

/// C^infinity step: 0 for t <= 0, 1 for t >= 1, and r(t) + r(1-t) = 1.
inline double smooth_step(double t) {
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    const double a = smooth_ramp(t);
    const double b = smooth_ramp(1.0 - t);
    return a / (a + b);
}

} // namespace pdolab
