#pragma once

#include <array>
#include <cmath>

namespace specavg {

/// Real 2x2 matrix ((a, b), (c, d)). Used for transfer products at real
/// energy and for the phase-conjugation matrices.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a * d - b * c; }

    Mat2 operator*(const Mat2& rhs) const {
        return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
    }

    std::array<double, 2> apply(double x, double y) const {
        return {a * x + b * y, c * x + d * y};
    }

    /// Entries of M^T M, as (xx, xy, yy).
    std::array<double, 3> gram() const {
        return {a * a + c * c, a * b + c * d, b * b + d * d};
    }

    /// Larger eigenvalue of M^T M (>= 1 when det M = +-1).
    double gram_top_eigenvalue() const {
        const auto g = gram();
        const double tr = g[0] + g[2];
        const double dt = g[0] * g[2] - g[1] * g[1];
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - dt));
        return tr / 2.0 + disc;
    }
};

} // namespace specavg
