#include "specavg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace specavg {

QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                        double a, double b, double tol,
                                        int max_depth) {
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, static_cast<unsigned>(max_depth), tol, &err);
    return {value, err};
}

ComplexQuadratureResult adaptive_gauss_kronrod_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol, int max_depth) {
    double err = 0.0;
    const std::complex<double> value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, a, b, static_cast<unsigned>(max_depth), tol, &err);
    return {value, err};
}

double fixed_gauss_panels(const std::function<double(double)>& f,
                          double a, double b, int panels) {
    if (panels < 1)
        throw std::invalid_argument("fixed_gauss_panels: need at least one panel");
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h;
        total += boost::math::quadrature::gauss<double, 15>::integrate(f, lo, lo + h);
    }
    return total;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre_rule: need n >= 1");
    std::vector<double> nodes(static_cast<std::size_t>(n));
    std::vector<double> weights(static_cast<std::size_t>(n));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < n; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x; // P_0, P_1
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return {std::move(nodes), std::move(weights)};
}

} // namespace specavg
