#include "specavg/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specavg/errors.hpp"
#include "specavg/tridiag.hpp"

namespace specavg {

namespace {

void check_angle_guards(const JacobiSpec& spec, double guard, const char* who) {
    if (std::abs(distance_to_tan_pole(spec.alpha())) < guard)
        throw std::invalid_argument(std::string(who) + ": alpha within guard of a tan pole");
    if (std::abs(distance_to_cot_pole(spec.beta())) < guard)
        throw std::invalid_argument(std::string(who) + ": beta within guard of a cot pole");
}

// diagonal (with the boundary angles folded in) and off-diagonal of the
// window operator
std::pair<std::vector<double>, std::vector<double>> boundary_arrays(const JacobiSpec& spec) {
    const int n = spec.size();
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int i = 1; i <= n; ++i)
        diag[static_cast<std::size_t>(i - 1)] = spec.potential(i);
    diag.front() += std::tan(spec.alpha());
    diag.back() += 1.0 / std::tan(spec.beta());
    for (int i = 2; i <= n; ++i)
        off[static_cast<std::size_t>(i - 2)] = spec.hopping(i);
    return {std::move(diag), std::move(off)};
}

// Thomas elimination for (H - z)x = e_m at Im z > 0. No pivoting: the
// Schur-complement pivots of a real symmetric tridiagonal shifted by -z all
// have imaginary part <= -Im z, so they never degenerate.
Complex solve_upper_half_plane(const std::vector<double>& diag,
                               const std::vector<double>& off,
                               Complex z, int n, int m) {
    const int size = static_cast<int>(diag.size());
    std::vector<Complex> piv(static_cast<std::size_t>(size));
    std::vector<Complex> rhs(static_cast<std::size_t>(size), Complex{0.0});
    rhs[static_cast<std::size_t>(m - 1)] = 1.0;
    piv[0] = diag[0] - z;
    for (int i = 1; i < size; ++i) {
        const Complex w = off[static_cast<std::size_t>(i - 1)] / piv[static_cast<std::size_t>(i - 1)];
        piv[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)] - z -
                                           w * off[static_cast<std::size_t>(i - 1)];
        rhs[static_cast<std::size_t>(i)] -= w * rhs[static_cast<std::size_t>(i - 1)];
    }
    std::vector<Complex> x(static_cast<std::size_t>(size));
    x[static_cast<std::size_t>(size - 1)] =
        rhs[static_cast<std::size_t>(size - 1)] / piv[static_cast<std::size_t>(size - 1)];
    for (int i = size - 2; i >= 0; --i)
        x[static_cast<std::size_t>(i)] =
            (rhs[static_cast<std::size_t>(i)] -
             off[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + 1)]) /
            piv[static_cast<std::size_t>(i)];
    return x[static_cast<std::size_t>(n - 1)];
}

} // namespace

Complex green_direct(const JacobiSpec& spec, Complex z, int n, int m, double pole_guard) {
    check_angle_guards(spec, pole_guard, "green_direct");
    const int size = spec.size();
    if (n < 1 || n > size || m < 1 || m > size)
        throw std::invalid_argument("green_direct: site out of range");
    if (z.imag() < 0.0)
        return std::conj(green_direct(spec, std::conj(z), n, m, pole_guard));

    auto [diag, off] = boundary_arrays(spec);
    if (z.imag() > 0.0)
        return solve_upper_half_plane(diag, off, z, n, m);

    // real energy: refuse within 1e-12 * scale of the spectrum, then solve
    // the dense real system with partial pivoting
    const std::vector<double> evals = tridiag_eigenvalues(diag, off);
    double scale = 1.0, dist = std::numeric_limits<double>::infinity();
    for (double ev : evals) {
        scale = std::max(scale, std::abs(ev));
        dist = std::min(dist, std::abs(ev - z.real()));
    }
    if (dist < 1e-12 * scale)
        throw singular_system_error("green_direct: real energy within 1e-12*norm of an eigenvalue");
    Eigen::MatrixXd h = build_finite_operator(spec, pole_guard);
    h.diagonal().array() -= z.real();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    rhs(m - 1) = 1.0;
    const Eigen::VectorXd x = h.partialPivLu().solve(rhs);
    return Complex{x(n - 1)};
}

std::array<Complex, 3> green_from_transfer(const JacobiSpec& spec, Complex z) {
    if (std::abs(spec.alpha()) > 1e-12 || std::abs(spec.beta() - kHalfPi) > 1e-12)
        throw std::invalid_argument("green_from_transfer: requires Dirichlet angles (0, pi/2)");
    const TransferMatrix t = transfer_product(spec, z, spec.size(), 0);
    if (std::abs(t.a) < 1e-300)
        throw singular_system_error("green_from_transfer: leading transfer entry underflows");
    return {-1.0 / t.a, t.b / t.a, -t.c / t.a};
}

Complex green_boundary(const JacobiSpec& spec, Complex z, double pole_guard) {
    check_angle_guards(spec, pole_guard, "green_boundary");
    const TransferMatrix t = transfer_product(spec, z, spec.size(), 0);
    const double ca = std::cos(spec.alpha()), sa = std::sin(spec.alpha());
    const double cb = std::cos(spec.beta()), sb = std::sin(spec.beta());
    const Complex num = ca * (t.b * sb - t.d * cb);
    const Complex den = sb * (t.a * ca + t.b * sa) - cb * (t.c * ca + t.d * sa);
    // the denominator combines the four transfer entries with coefficients
    // of modulus <= 1, so anything below ~100 rounding errors of the largest
    // entry is numerically indistinguishable from zero
    const double entry_scale = std::max({std::abs(t.a), std::abs(t.b), std::abs(t.c), std::abs(t.d)});
    if (std::abs(den) < 1e-14 * entry_scale)
        throw degenerate_boundary_error("green_boundary: boundary denominator vanishes");
    return num / den;
}

Complex beta_averaged_green(const JacobiSpec& spec, Complex z, double alpha, double pole_guard) {
    if (!(z.imag() > 0.0))
        throw std::invalid_argument("beta_averaged_green: requires Im z > 0");
    if (std::abs(distance_to_tan_pole(alpha)) < pole_guard)
        throw std::invalid_argument("beta_averaged_green: alpha within guard of a tan pole");
    const TransferMatrix t = transfer_product(spec, z, spec.size(), 0);
    const double ta = std::tan(alpha);
    const Complex i{0.0, 1.0};
    return (t.b + i * t.d) / ((t.a + t.b * ta) + i * (t.c + t.d * ta));
}

double beta_averaged_density(const JacobiSpec& spec, double energy, double alpha,
                             double pole_guard) {
    if (std::abs(distance_to_tan_pole(alpha)) < pole_guard)
        throw std::invalid_argument("beta_averaged_density: alpha within guard of a tan pole");
    const Mat2 t = transfer_product_real(spec, energy, spec.size(), 0);
    const double ta = std::tan(alpha);
    const double x = t.a + t.b * ta;
    const double y = t.c + t.d * ta;
    return 1.0 / (kPi * (x * x + y * y));
}

} // namespace specavg
