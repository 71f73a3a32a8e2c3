#include "specavg/jacobi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "specavg/tridiag.hpp"

namespace specavg {

double distance_to_tan_pole(double angle) {
    // poles of tan at pi/2 + k*pi: shift so they land on multiples of pi
    return std::remainder(angle - kHalfPi, kPi);
}

double distance_to_cot_pole(double angle) {
    return std::remainder(angle, kPi);
}

TailDescriptor TailDescriptor::free_laplacian() {
    TailDescriptor t(Kind::free);
    return t;
}

TailDescriptor TailDescriptor::periodic(std::vector<double> hoppings,
                                        std::vector<double> potentials) {
    if (hoppings.empty() || potentials.empty())
        throw std::invalid_argument("periodic tail needs non-empty cells");
    for (double t : hoppings)
        if (!(t > 0.0))
            throw std::invalid_argument("periodic tail hoppings must be positive");
    TailDescriptor t(Kind::periodic);
    t.hoppings_ = std::move(hoppings);
    t.potentials_ = std::move(potentials);
    return t;
}

TailDescriptor TailDescriptor::callback(std::function<double(int)> hopping,
                                        std::function<double(int)> potential) {
    if (!hopping || !potential)
        throw std::invalid_argument("callback tail needs both callbacks");
    TailDescriptor t(Kind::callback);
    t.hopping_fn_ = std::move(hopping);
    t.potential_fn_ = std::move(potential);
    return t;
}

double TailDescriptor::hopping(int offset) const {
    if (offset < 1)
        throw std::invalid_argument("tail offset must be >= 1");
    switch (kind_) {
    case Kind::free:
        return 1.0;
    case Kind::periodic:
        return hoppings_[static_cast<std::size_t>((offset - 1) % static_cast<int>(hoppings_.size()))];
    case Kind::callback:
        return hopping_fn_(offset);
    }
    return 1.0;
}

double TailDescriptor::potential(int offset) const {
    if (offset < 1)
        throw std::invalid_argument("tail offset must be >= 1");
    switch (kind_) {
    case Kind::free:
        return 0.0;
    case Kind::periodic:
        return potentials_[static_cast<std::size_t>((offset - 1) % static_cast<int>(potentials_.size()))];
    case Kind::callback:
        return potential_fn_(offset);
    }
    return 0.0;
}

JacobiSpec::JacobiSpec(std::vector<double> potentials, std::vector<double> hoppings,
                       double alpha, double beta, TailDescriptor tail)
    : potentials_(std::move(potentials)), hoppings_(std::move(hoppings)),
      alpha_(alpha), beta_(beta), tail_(std::move(tail)) {
    if (potentials_.empty())
        throw std::invalid_argument("JacobiSpec needs at least one site");
    if (hoppings_.size() + 1 != potentials_.size())
        throw std::invalid_argument("JacobiSpec: expected N-1 hoppings for N sites, got " +
                                    std::to_string(hoppings_.size()));
    for (double t : hoppings_)
        if (!(t > 0.0))
            throw std::invalid_argument("JacobiSpec: hoppings must be positive");
}

JacobiSpec JacobiSpec::free_laplacian(int n) {
    if (n < 1)
        throw std::invalid_argument("free_laplacian: need n >= 1");
    return JacobiSpec(std::vector<double>(static_cast<std::size_t>(n), 0.0),
                      std::vector<double>(static_cast<std::size_t>(n - 1), 1.0));
}

double JacobiSpec::hopping(int n) const {
    if (n < 1)
        throw std::invalid_argument("hopping index must be >= 1");
    if (n == 1)
        return 1.0;
    if (n <= size())
        return hoppings_[static_cast<std::size_t>(n - 2)];
    return tail_.hopping(n - size());
}

double JacobiSpec::potential(int n) const {
    if (n < 1)
        throw std::invalid_argument("potential index must be >= 1");
    if (n <= size())
        return potentials_[static_cast<std::size_t>(n - 1)];
    return tail_.potential(n - size());
}

JacobiSpec JacobiSpec::with_boundary(double alpha, double beta) const {
    JacobiSpec out = *this;
    out.alpha_ = alpha;
    out.beta_ = beta;
    return out;
}

JacobiSpec JacobiSpec::with_potential(int n, double value) const {
    if (n < 1 || n > size())
        throw std::invalid_argument("with_potential: site outside window");
    JacobiSpec out = *this;
    out.potentials_[static_cast<std::size_t>(n - 1)] = value;
    return out;
}

JacobiSpec JacobiSpec::with_tail(TailDescriptor tail) const {
    JacobiSpec out = *this;
    out.tail_ = std::move(tail);
    return out;
}

Eigen::MatrixXd build_finite_operator(const JacobiSpec& spec, double pole_guard) {
    if (std::abs(distance_to_tan_pole(spec.alpha())) < pole_guard)
        throw std::invalid_argument("build_finite_operator: alpha within guard of a tan pole");
    if (std::abs(distance_to_cot_pole(spec.beta())) < pole_guard)
        throw std::invalid_argument("build_finite_operator: beta within guard of a cot pole");
    const int n = spec.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i <= n; ++i)
        h(i - 1, i - 1) = spec.potential(i);
    h(0, 0) += std::tan(spec.alpha());
    h(n - 1, n - 1) += 1.0 / std::tan(spec.beta());
    for (int i = 2; i <= n; ++i) {
        h(i - 1, i - 2) = spec.hopping(i);
        h(i - 2, i - 1) = spec.hopping(i);
    }
    return h;
}

TransferMatrix transfer_matrix(double t, double v, Complex z) {
    if (!(t > 0.0))
        throw std::invalid_argument("transfer_matrix: hopping must be positive");
    return {(z - v) / t, Complex{-t}, Complex{1.0 / t}, Complex{0.0}};
}

TransferMatrix transfer_product(const JacobiSpec& spec, Complex z, int n, int m) {
    if (m < 0 || n < m)
        throw std::invalid_argument("transfer_product: need n >= m >= 0");
    TransferMatrix prod = TransferMatrix::identity();
    for (int j = m + 1; j <= n; ++j)
        prod = transfer_matrix(spec.hopping(j), spec.potential(j), z) * prod;
    return prod;
}

Mat2 transfer_product_real(const JacobiSpec& spec, double energy, int n, int m) {
    if (m < 0 || n < m)
        throw std::invalid_argument("transfer_product_real: need n >= m >= 0");
    Mat2 prod = Mat2::identity();
    for (int j = m + 1; j <= n; ++j) {
        const double t = spec.hopping(j), v = spec.potential(j);
        if (!(t > 0.0))
            throw std::invalid_argument("transfer_product_real: hopping must be positive");
        prod = Mat2{(energy - v) / t, -t, 1.0 / t, 0.0} * prod;
    }
    return prod;
}

Wavefunction solve_schrodinger(const JacobiSpec& spec, Complex z, int up_to) {
    if (up_to < 0)
        throw std::invalid_argument("solve_schrodinger: need up_to >= 0");
    std::vector<Complex> phi(static_cast<std::size_t>(up_to) + 2);
    phi[0] = std::sin(spec.alpha());
    phi[1] = std::cos(spec.alpha()); // t_1 = 1
    for (int n = 1; n <= up_to; ++n)
        phi[static_cast<std::size_t>(n) + 1] =
            ((z - spec.potential(n)) * phi[static_cast<std::size_t>(n)] -
             spec.hopping(n) * phi[static_cast<std::size_t>(n) - 1]) /
            spec.hopping(n + 1);
    return Wavefunction(std::move(phi), z, spec.alpha());
}

std::vector<double> eigenvalues(const JacobiSpec& spec, double pole_guard) {
    if (std::abs(distance_to_tan_pole(spec.alpha())) < pole_guard)
        throw std::invalid_argument("eigenvalues: alpha within guard of a tan pole");
    if (std::abs(distance_to_cot_pole(spec.beta())) < pole_guard)
        throw std::invalid_argument("eigenvalues: beta within guard of a cot pole");
    const int n = spec.size();
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int i = 1; i <= n; ++i)
        diag[static_cast<std::size_t>(i - 1)] = spec.potential(i);
    diag.front() += std::tan(spec.alpha());
    diag.back() += 1.0 / std::tan(spec.beta());
    for (int i = 2; i <= n; ++i)
        off[static_cast<std::size_t>(i - 2)] = spec.hopping(i);
    return tridiag_eigenvalues(std::move(diag), std::move(off));
}

} // namespace specavg
