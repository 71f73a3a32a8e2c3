#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "specavg/density.hpp"
#include "specavg/jacobi.hpp"

namespace specavg {

/// Nonnegative diagonal perturbation W = sum w_n |n><n|.
class PerturbationW {
public:
    explicit PerturbationW(std::vector<double> weights);

    const std::vector<double>& weights() const { return weights_; }
    int size() const { return static_cast<int>(weights_.size()); }
    bool strictly_positive() const;
    /// Smallest 1-based m with w_m > 0 and w_{m+1} > 0, if any.
    std::optional<int> adjacent_positive_pair() const;

private:
    std::vector<double> weights_;
};

struct BirmanSchwinger {
    Eigen::MatrixXd matrix;          // W^{1/2} (E - H)^{-1} W^{1/2}
    std::vector<double> eigenvalues; // ascending
};

struct BirmanSchwingerReport {
    double energy = 0.0;
    double mu_lo = 0.0, mu_hi = 0.0;
    /// Empty when condition_b is not evaluable (energy resonant with the
    /// unperturbed spectrum).
    std::vector<double> k_eigenvalues;
    std::vector<double> crossing_mus;
    bool adjacent_positive_pair = false;
    /// Two eigenvalue branches of H + mu W cross the energy inside
    /// (mu_lo, mu_hi) at consecutive branch indices, located by grid
    /// tracking plus bisection.
    bool condition_a = false;
    /// Two consecutive reciprocals of Birman-Schwinger eigenvalues lie
    /// inside (mu_lo, mu_hi); nullopt when the energy is within
    /// 1e-9 * norm of the unperturbed spectrum (the duality degenerates).
    std::optional<bool> condition_b;
    double phase_rotation = 0.0; // theta_N(mu_hi) - theta_N(mu_lo)
    bool rotation_exceeds_pi = false;
};

struct AveragedDensityResult {
    DensityEstimate density;
    /// Per grid energy: 1 if condition (b) held, 0 if not, -1 if it was not
    /// evaluable there.
    std::vector<int> certified;
};

/// K = W^{1/2} (E - H)^{-1} W^{1/2} with its spectrum. Throws
/// resonance_error when E is within 1e-9 * norm of an eigenvalue of the
/// base operator.
BirmanSchwinger birman_schwinger(const JacobiSpec& base, const PerturbationW& w,
                                 double energy);

/// All couplings mu at which the energy is an eigenvalue of base + mu W,
/// as reciprocals of the nonzero Birman-Schwinger eigenvalues, ascending.
/// Requires strictly positive W.
std::vector<double> crossing_mus(const JacobiSpec& base, const PerturbationW& w,
                                 double energy);

/// Check the averaging hypotheses on the coupling interval. The base spec
/// must carry the Dirichlet right angle beta = pi/2 (the left angle is free,
/// it folds into the first diagonal entry).
BirmanSchwingerReport certify_theorem_conditions(const JacobiSpec& base,
                                                 const PerturbationW& w, double energy,
                                                 double mu_lo, double mu_hi);

/// Number of couplings in (mu_lo, mu_hi) at which the energy is an
/// eigenvalue of base + mu W, counted through the Pruefer phase at site N:
/// the phase is monotone in mu and passes pi/2 (mod pi) at each crossing.
int crossing_count_from_rotation(const JacobiSpec& base, const PerturbationW& w,
                                 double energy, double mu_lo, double mu_hi);

/// For each grid energy, the integral over mu in [mu_lo, mu_hi] of the
/// Carmona integrand 1/(pi R_L^E(mu)^2) at seed alpha = 0, by fixed-order
/// Gauss-Legendre in mu (fixed summation order, so runs are reproducible).
/// `certified` records per energy whether condition (b) holds on the
/// interval; stability against doubling the truncation goes to
/// density.stability / density.converged.
AveragedDensityResult one_parameter_averaged_density(const JacobiSpec& base,
                                                     const PerturbationW& w,
                                                     double mu_lo, double mu_hi,
                                                     const std::vector<double>& grid,
                                                     int truncation, int mu_nodes = 64);

} // namespace specavg
