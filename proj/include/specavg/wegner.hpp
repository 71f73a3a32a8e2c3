#pragma once

#include <cstdint>
#include <vector>

#include "specavg/density.hpp"
#include "specavg/jacobi.hpp"

namespace specavg {

/// The random window model: free Laplacian hoppings over n_sites sites,
/// potential lambda * v_n with v_n i.i.d. uniform on [-1/2, 1/2], an
/// arbitrary deterministic continuation beyond the window, truncated at
/// `truncation` sites for flow evaluation, plus the energy interval the
/// experiment targets. The interval closure must lie inside
/// (-2 + lambda/2, 2 - lambda/2) so the modified-phase machinery applies on
/// all of it.
class RandomModelSpec {
public:
    RandomModelSpec(double lambda, int n_sites, int truncation, double interval_lo,
                    double interval_hi, TailDescriptor tail = TailDescriptor::free_laplacian());

    double lambda() const { return lambda_; }
    int n_sites() const { return n_sites_; }
    int truncation() const { return truncation_; }
    double interval_lo() const { return interval_lo_; }
    double interval_hi() const { return interval_hi_; }
    const TailDescriptor& tail() const { return tail_; }

private:
    double lambda_;
    int n_sites_, truncation_;
    double interval_lo_, interval_hi_;
    TailDescriptor tail_;
};

struct PotentialSample {
    std::vector<double> values; // each in [-1/2, 1/2)
    std::uint64_t seed = 0;
};

struct PhaseHistogram {
    std::vector<double> edges; // bins + 1 ascending
    std::vector<std::int64_t> counts;
    /// Free-flow prediction lift(0) + n_sites * k for the final phase.
    double reference = 0.0;
    double mean_offset = 0.0; // mean of (final phase - reference)
    double std_offset = 0.0;
    std::int64_t samples = 0;
};

/// Deterministic i.i.d. uniform [-1/2, 1/2) draw of length n from a
/// splitmix64 stream.
PotentialSample sample_potential(std::uint64_t seed, int n);

/// Window operator for one disorder realization: potentials lambda * v,
/// unit hoppings, Dirichlet angles, the model tail beyond the window.
JacobiSpec random_operator(const RandomModelSpec& model, const std::vector<double>& v);

/// Modified phase at the window edge for the extreme potential v = +1/2
/// minus the same at v = -1/2 (seed alpha = 0). Positive for lambda > 0 by
/// monotonicity of the phase in every potential entry; grows like
/// n_sites * lambda. Requires |energy| < 2 - lambda/2. The result depends
/// only on the window, not on any tail.
double phase_spread(double lambda, int n_sites, double energy);

/// Smallest window size whose phase spread exceeds pi + 0.2 at every energy
/// of a 17-point grid on [interval_lo, interval_hi] (doubling search plus
/// bisection, minimality verified). Throws when no window up to 1e6 sites
/// suffices.
int choose_n_sites(double lambda, double interval_lo, double interval_hi);

/// Monte-Carlo average over disorder of the Carmona integrand
/// 1/(pi R_truncation(v)^2) at seed alpha = 0, per grid energy, with
/// standard errors. Bit-reproducible for a fixed seed at any thread count:
/// per-sample seeds are derived arithmetically and the reduction is a fixed
/// pairwise tree.
DensityEstimate averaged_density_mc(const RandomModelSpec& model, int samples,
                                    const std::vector<double>& grid, std::uint64_t seed,
                                    int threads = 1);

/// Final modified phase minus its second-order model
///   lift(0) + N k + lambda * sum_n v_n (1 + cos(2 theta_hat_{n-1})),
/// with N = v.size(). Scales like N * lambda^2.
double expansion_residual(double lambda, const std::vector<double>& v, double energy);

/// Histogram of the final modified phase over disorder, with the mean and
/// standard deviation of its offset from the free-flow prediction.
PhaseHistogram phase_pushforward_histogram(double lambda, int n_sites, double energy,
                                           int samples, int bins, std::uint64_t seed);

} // namespace specavg
