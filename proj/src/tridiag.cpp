#include "specavg/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace specavg {

// Implicit-shift QL iteration in the classical EISPACK tql1 form, without
// eigenvector accumulation. Plane rotations are applied with hypot to avoid
// overflow in intermediate squares.
std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return {};
    if (e.size() != d.size() - 1)
        throw std::invalid_argument("tridiag_eigenvalues: off-diagonal must have size n-1");
    e.push_back(0.0);

    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error("tridiag_eigenvalues: QL iteration did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                // Wilkinson shift, with the sign chosen to avoid cancellation.
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::sort(d.begin(), d.end());
    return d;
}

} // namespace specavg
