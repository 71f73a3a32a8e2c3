#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "specavg/density.hpp"
#include "specavg/jacobi.hpp"
#include "specavg/mat2.hpp"

namespace specavg {

/// Polar coordinates of the solution pair u_n = (t_{n+1} phi_{n+1}, phi_n)
/// at real energy: continuous phase lift theta and log of the radius (the
/// radius itself overflows doubles on long off-spectrum flows).
struct PrueferState {
    int site = 0;
    double theta = 0.0;
    double log_radius = 0.0;

    double radius() const { return std::exp(log_radius); }
};

struct ModifiedPrueferState {
    int site = 0;
    double theta = 0.0;      // modified lift
    double log_radius = 0.0; // log of the modified radius

    double radius() const { return std::exp(log_radius); }
};

struct AlphaAverageResult {
    double value = 0.0;
    double error_estimate = 0.0;
    /// Set when the squared transfer product has condition number above
    /// 1e12; the quadrature value is then untrustworthy at tight tolerances.
    bool condition_warning = false;
};

/// Pointwise Carmona estimates plus window integrals with their
/// truncation-doubling stability indicators.
struct CarmonaResult {
    DensityEstimate density;
    std::vector<std::array<double, 2>> windows;
    std::vector<double> window_integrals;
    /// |integral at 2N - integral at N| per window.
    std::vector<double> window_stability;
};

/// The conjugation trivializing the free dynamics at energy E in (-2, 2):
/// rotation by the quasi-momentum k = arccos(E/2) after the change of frame
/// M = (1/sqrt(sin k)) ((sin k, 0), (-cos k, 1)). `lift` is the continuous
/// increasing lift of theta -> angle(M e_theta) with lift(0) = k - pi/2 and
/// lift(theta + pi) = lift(theta) + pi; its derivative 1/|M e_theta|^2 is
/// pinned between the reciprocal extreme singular values squared,
/// lower_bound = sin k/(1+|cos k|) and upper_bound = (1+|cos k|)/sin k.
class ModifiedMap {
public:
    explicit ModifiedMap(double energy); // throws std::domain_error unless |E| < 2

    double energy() const { return energy_; }
    double k() const { return k_; }
    Mat2 matrix() const;
    Mat2 inverse_matrix() const;

    double lift(double theta) const;
    double inverse_lift(double psi) const;
    double derivative(double theta) const;
    double lower_bound() const { return s_ / (1.0 + std::abs(c_)); }
    double upper_bound() const { return (1.0 + std::abs(c_)) / s_; }

private:
    double energy_, k_, s_, c_;
};

/// Flow of (theta, log R) from the seed u_0 = (cos alpha, sin alpha) up to
/// `up_to` sites. Each increment is branch-fixed to [-pi/2, 3pi/2); the
/// lower endpoint is never attained (the image of e_theta under a
/// single-site factor cannot point along -e_{theta + pi/2}).
std::vector<PrueferState> pruefer_flow(const JacobiSpec& spec, double energy,
                                       double alpha, int up_to);

/// Quadrature of 1/R_N(alpha)^2 over alpha in (0, pi) against d(alpha)/pi;
/// equals 1 identically. The integrand peaks at the angle of the smallest
/// singular direction of the transfer product, so the interval is split
/// there before adaptive integration.
AlphaAverageResult alpha_average_inverse_r2(const JacobiSpec& spec, double energy,
                                            int n_sites, double tol = 1e-10);

/// d(theta_N)/dE = -sum_{n=1..N} phi_n^2 / R_N^2, evaluated in log-radius
/// form so long hyperbolic flows cannot overflow.
double phase_derivative_energy(const JacobiSpec& spec, double energy, double alpha,
                               int n_sites);

/// d(theta_N)/d(v_site) = +phi_site^2 / R_N^2, site in 1..N. Nonnegative,
/// which is what makes the phase monotone in every potential entry.
double phase_derivative_potential(const JacobiSpec& spec, double energy, double alpha,
                                  int n_sites, int site);

/// cos^2(alpha) / (pi R_N(alpha)^2) at a single energy.
double carmona_density_value(const JacobiSpec& spec, double alpha, double energy,
                             int truncation);

/// Integral of the Carmona density over [e_lo, e_hi] by composite
/// fixed-order panels. With panels = 0 the panel count is chosen from the
/// phase-oscillation scale (about 8 panels per oscillation of R_N(E)^2).
double carmona_window_integral(const JacobiSpec& spec, double alpha, double e_lo,
                               double e_hi, int truncation, int panels = 0);

/// Pointwise Carmona density on a grid plus window integrals at truncation
/// N and their change under N -> 2N. density.converged reports whether every
/// window moved by at most 5e-3.
CarmonaResult carmona_density(const JacobiSpec& spec, double alpha,
                              const std::vector<double>& grid,
                              const std::vector<std::array<double, 2>>& windows,
                              int truncation);

/// Modified flow: states (lift(theta_n), log R_n + log|M e_{theta_n}|) of
/// the plain flow mapped through the conjugation at the flow energy.
/// Requires |energy| < 2.
std::vector<ModifiedPrueferState> modified_pruefer_flow(const JacobiSpec& spec,
                                                        double energy, double alpha,
                                                        int up_to);

/// Eigenvalues of the Dirichlet window operator strictly below E, counted
/// through the phase: N - ceil((theta_N - pi/2)/pi). Exact for E off the
/// spectrum.
int count_eigenvalues_below(const JacobiSpec& spec, double energy);

} // namespace specavg
