#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "specavg/mat2.hpp"

namespace specavg {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Guard distance around the poles of tan(alpha) and cot(beta) inside which
/// matrix assembly is refused.
inline constexpr double kDefaultPoleGuard = 1e-6;

/// Signed distance of `angle` to the nearest pole of tan (at pi/2 mod pi).
double distance_to_tan_pole(double angle);
/// Signed distance of `angle` to the nearest pole of cot (at 0 mod pi).
double distance_to_cot_pole(double angle);

/// Coefficients of the operator beyond the explicitly stored window.
/// Offsets are 1-based: hopping(1) is the coupling between the last window
/// site and the first tail site.
class TailDescriptor {
public:
    /// Free Laplacian continuation: unit hoppings, zero potential.
    static TailDescriptor free_laplacian();
    /// Periodic continuation with the given coefficient cells (hoppings must
    /// be positive, cells non-empty).
    static TailDescriptor periodic(std::vector<double> hoppings, std::vector<double> potentials);
    /// Arbitrary continuation; both callbacks receive the 1-based offset.
    static TailDescriptor callback(std::function<double(int)> hopping,
                                   std::function<double(int)> potential);

    TailDescriptor() : TailDescriptor(free_laplacian()) {}

    double hopping(int offset) const;
    double potential(int offset) const;

private:
    enum class Kind { free, periodic, callback };
    TailDescriptor(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<double> hoppings_, potentials_;
    std::function<double(int)> hopping_fn_, potential_fn_;
};

/// A finite Jacobi matrix window: hoppings t_2..t_N > 0, potentials
/// v_1..v_N, boundary angles alpha (left) and beta (right), and a tail rule
/// for sites beyond N used when flows are run past the window.
///
/// The conventions are t_1 = t_{N+1} = 1 and boundary conditions entering
/// the endpoint diagonal entries as v_1 + tan(alpha), v_N + cot(beta).
/// Angles are projective: any real value is accepted, matrix assembly is
/// refused within a guard distance of the tan/cot poles.
class JacobiSpec {
public:
    JacobiSpec(std::vector<double> potentials, std::vector<double> hoppings,
               double alpha = 0.0, double beta = kHalfPi,
               TailDescriptor tail = TailDescriptor::free_laplacian());

    /// Window of size n with zero potential, unit hoppings and Dirichlet
    /// boundary conditions (alpha = 0, beta = pi/2).
    static JacobiSpec free_laplacian(int n);

    int size() const { return static_cast<int>(potentials_.size()); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const TailDescriptor& tail() const { return tail_; }

    /// t_n for any n >= 1; t_1 = 1, sites beyond the window come from the
    /// tail descriptor.
    double hopping(int n) const;
    /// v_n for any n >= 1; sites beyond the window come from the tail.
    double potential(int n) const;

    JacobiSpec with_boundary(double alpha, double beta) const;
    JacobiSpec with_potential(int n, double value) const; // n in 1..N
    JacobiSpec with_tail(TailDescriptor tail) const;

private:
    std::vector<double> potentials_; // v_1..v_N
    std::vector<double> hoppings_;   // t_2..t_N
    double alpha_, beta_;
    TailDescriptor tail_;
};

/// 2x2 complex transfer matrix ((a, b), (c, d)). Single-site factors have
/// determinant exactly 1; products keep it to rounding.
struct TransferMatrix {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static TransferMatrix identity() { return {}; }

    Complex det() const { return a * d - b * c; }

    TransferMatrix operator*(const TransferMatrix& rhs) const {
        return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
    }
};

/// Solution phi_0..phi_{M+1} of the three-term recurrence at energy z with
/// left boundary seed alpha: phi_0 = sin(alpha), phi_1 = cos(alpha).
class Wavefunction {
public:
    Wavefunction(std::vector<Complex> values, Complex z, double alpha)
        : values_(std::move(values)), z_(z), alpha_(alpha) {}

    Complex z() const { return z_; }
    double alpha() const { return alpha_; }
    /// Highest site M such that phi(0..M+1) are available.
    int top_site() const { return static_cast<int>(values_.size()) - 2; }
    Complex phi(int n) const { return values_.at(static_cast<std::size_t>(n)); }

private:
    std::vector<Complex> values_;
    Complex z_;
    double alpha_;
};

/// Dense symmetric tridiagonal matrix of the window operator, with the
/// boundary angles folded into the endpoint diagonal entries.
/// Throws std::invalid_argument when alpha or beta is within `pole_guard`
/// of a tan/cot pole.
Eigen::MatrixXd build_finite_operator(const JacobiSpec& spec,
                                      double pole_guard = kDefaultPoleGuard);

/// Single-site transfer matrix ((z - v)/t, -t; 1/t, 0). Requires t > 0.
TransferMatrix transfer_matrix(double t, double v, Complex z);

/// Ordered product of single-site factors from site m+1 up to n;
/// the empty product (n == m) is the identity. Requires n >= m >= 0.
TransferMatrix transfer_product(const JacobiSpec& spec, Complex z, int n, int m);

/// Same product at real energy, in real arithmetic.
Mat2 transfer_product_real(const JacobiSpec& spec, double energy, int n, int m);

/// Solve the recurrence t_{n+1} phi_{n+1} = (z - v_n) phi_n - t_n phi_{n-1}
/// up to site `up_to`, seeding (t_1 phi_1, phi_0) = (cos alpha, sin alpha).
/// Coefficients beyond the window come from the tail descriptor.
Wavefunction solve_schrodinger(const JacobiSpec& spec, Complex z, int up_to);

/// Eigenvalues of the window operator, strictly increasing (positive
/// off-diagonals make the spectrum simple). Computed by the tridiagonal QL
/// solver in tridiag.hpp.
std::vector<double> eigenvalues(const JacobiSpec& spec,
                                double pole_guard = kDefaultPoleGuard);

} // namespace specavg
