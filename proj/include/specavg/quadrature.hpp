#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace specavg {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct ComplexQuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) quadrature of f over [a, b] to the
/// requested tolerance (relative to the L1 mass of the integrand). Panels are
/// subdivided where the local error estimate is large, so integrands with
/// isolated spikes are fine as long as max_depth admits enough levels.
QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                        double a, double b, double tol = 1e-12,
                                        int max_depth = 20);

/// Same rule for a complex-valued integrand. Integrating both parts jointly
/// keeps the convergence target tied to the modulus, which matters when one
/// part integrates to nearly zero by cancellation.
ComplexQuadratureResult adaptive_gauss_kronrod_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol = 1e-12, int max_depth = 20);

/// Composite fixed-order Gauss-Legendre quadrature on `panels` uniform
/// subintervals of [a, b], 15 nodes per panel. No adaptivity: the caller
/// chooses the panel count from the known oscillation scale.
double fixed_gauss_panels(const std::function<double(double)>& f,
                          double a, double b, int panels);

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n);

} // namespace specavg
