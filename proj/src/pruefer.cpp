#include "specavg/pruefer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specavg/quadrature.hpp"

namespace specavg {

namespace {

constexpr double kStabilityThreshold = 5e-3;

struct PolarStep {
    double dtheta;
    double dlog_r;
};

// image of e_theta under ((E - v)/t, -t; 1/t, 0), as a branch-fixed phase
// increment plus a log-radius increment
PolarStep polar_step(double t, double v, double energy, double theta) {
    const double x = std::cos(theta), y = std::sin(theta);
    const double wx = (energy - v) * x / t - t * y;
    const double wy = x / t;
    double delta = std::atan2(wy, wx) - theta;
    delta -= 2.0 * kPi * std::floor((delta + kHalfPi) / (2.0 * kPi));
    return {delta, 0.5 * std::log(wx * wx + wy * wy)};
}

} // namespace

std::vector<PrueferState> pruefer_flow(const JacobiSpec& spec, double energy,
                                       double alpha, int up_to) {
    if (up_to < 0)
        throw std::invalid_argument("pruefer_flow: need up_to >= 0");
    std::vector<PrueferState> states;
    states.reserve(static_cast<std::size_t>(up_to) + 1);
    states.push_back({0, alpha, 0.0});
    double theta = alpha, log_r = 0.0;
    for (int n = 1; n <= up_to; ++n) {
        const PolarStep step = polar_step(spec.hopping(n), spec.potential(n), energy, theta);
        theta += step.dtheta;
        log_r += step.dlog_r;
        states.push_back({n, theta, log_r});
    }
    return states;
}

AlphaAverageResult alpha_average_inverse_r2(const JacobiSpec& spec, double energy,
                                            int n_sites, double tol) {
    if (n_sites < 0)
        throw std::invalid_argument("alpha_average_inverse_r2: need n_sites >= 0");
    const Mat2 t = transfer_product_real(spec, energy, n_sites, 0);
    const auto [p, q, r] = t.gram();
    const double kappa_top = t.gram_top_eigenvalue();

    AlphaAverageResult result;
    result.condition_warning = kappa_top * kappa_top > 1e12;

    // peak of 1/R^2 sits along the smallest singular direction
    const double kappa_bot = 1.0 / kappa_top; // det of the gram matrix is 1
    double eta;
    if (std::abs(q) > 1e-300)
        eta = std::atan2(kappa_bot - p, q);
    else
        eta = (p <= r) ? 0.0 : kHalfPi;
    eta -= kPi * std::floor(eta / kPi); // representative in [0, pi)

    const auto integrand = [&](double a) {
        const double c = std::cos(a), s = std::sin(a);
        return 1.0 / (kPi * (p * c * c + 2.0 * q * c * s + r * s * s));
    };
    for (const auto& [lo, hi] : {std::pair{0.0, eta}, std::pair{eta, kPi}}) {
        if (hi <= lo)
            continue;
        const QuadratureResult piece = adaptive_gauss_kronrod(integrand, lo, hi, tol);
        result.value += piece.value;
        result.error_estimate += piece.error_estimate;
    }
    return result;
}

double phase_derivative_energy(const JacobiSpec& spec, double energy, double alpha,
                               int n_sites) {
    const auto states = pruefer_flow(spec, energy, alpha, n_sites);
    const double log_rn = states.back().log_radius;
    double sum = 0.0;
    for (int n = 1; n <= n_sites; ++n) {
        const double s = std::sin(states[static_cast<std::size_t>(n)].theta);
        sum += std::exp(2.0 * (states[static_cast<std::size_t>(n)].log_radius - log_rn)) * s * s;
    }
    return -sum;
}

double phase_derivative_potential(const JacobiSpec& spec, double energy, double alpha,
                                  int n_sites, int site) {
    if (site < 1 || site > n_sites)
        throw std::invalid_argument("phase_derivative_potential: site must lie in 1..n_sites");
    const auto states = pruefer_flow(spec, energy, alpha, n_sites);
    const double s = std::sin(states[static_cast<std::size_t>(site)].theta);
    return std::exp(2.0 * (states[static_cast<std::size_t>(site)].log_radius -
                           states.back().log_radius)) *
           s * s;
}

double carmona_density_value(const JacobiSpec& spec, double alpha, double energy,
                             int truncation) {
    if (truncation < 0)
        throw std::invalid_argument("carmona_density_value: need truncation >= 0");
    // only the final radius matters here, and energy quadratures call this per
    // node: evolve the solution pair directly and accumulate the log norm at
    // rescalings instead of paying polar_step's trigonometry on every site
    double x = std::cos(alpha), y = std::sin(alpha);
    double log_r2 = 0.0;
    for (int n = 1; n <= truncation; ++n) {
        const double t = spec.hopping(n), v = spec.potential(n);
        const double wx = (energy - v) * x / t - t * y;
        const double wy = x / t;
        x = wx;
        y = wy;
        const double norm2 = x * x + y * y;
        if (norm2 > 1e150 || norm2 < 1e-150) {
            log_r2 += std::log(norm2);
            const double inv = 1.0 / std::sqrt(norm2);
            x *= inv;
            y *= inv;
        }
    }
    log_r2 += std::log(x * x + y * y);
    const double c = std::cos(alpha);
    return c * c * std::exp(-log_r2) / kPi;
}

double carmona_window_integral(const JacobiSpec& spec, double alpha, double e_lo,
                               double e_hi, int truncation, int panels) {
    if (!(e_hi > e_lo))
        throw std::invalid_argument("carmona_window_integral: need e_hi > e_lo");
    if (panels <= 0) {
        // R_N(E)^2 oscillates on the scale of the phase velocity, at most
        // about N per unit energy; 8 panels per oscillation is comfortable
        // for the 15-node rule
        panels = std::max(8, static_cast<int>(std::ceil((e_hi - e_lo) * truncation * 4.0 / kPi)));
    }
    return fixed_gauss_panels(
        [&](double e) { return carmona_density_value(spec, alpha, e, truncation); },
        e_lo, e_hi, panels);
}

CarmonaResult carmona_density(const JacobiSpec& spec, double alpha,
                              const std::vector<double>& grid,
                              const std::vector<std::array<double, 2>>& windows,
                              int truncation) {
    if (truncation < 1)
        throw std::invalid_argument("carmona_density: need truncation >= 1");
    CarmonaResult result;
    result.windows = windows;
    result.density.energies = grid;
    result.density.method = "carmona";
    result.density.truncation = truncation;
    result.density.values.reserve(grid.size());
    for (double e : grid)
        result.density.values.push_back(carmona_density_value(spec, alpha, e, truncation));
    result.density.stderrs.assign(grid.size(), 0.0);

    double worst = 0.0;
    for (const auto& [lo, hi] : windows) {
        const double at_n = carmona_window_integral(spec, alpha, lo, hi, truncation);
        const double at_2n = carmona_window_integral(spec, alpha, lo, hi, 2 * truncation);
        result.window_integrals.push_back(at_n);
        result.window_stability.push_back(std::abs(at_2n - at_n));
        worst = std::max(worst, std::abs(at_2n - at_n));
    }
    result.density.stability = worst;
    result.density.converged = worst <= kStabilityThreshold;
    result.density.validate();
    return result;
}

ModifiedMap::ModifiedMap(double energy) : energy_(energy) {
    if (!(std::abs(energy) < 2.0))
        throw std::domain_error("ModifiedMap: energy must lie in (-2, 2)");
    k_ = std::acos(energy / 2.0);
    s_ = std::sin(k_);
    c_ = std::cos(k_);
}

Mat2 ModifiedMap::matrix() const {
    const double rs = 1.0 / std::sqrt(s_);
    return {s_ * rs, 0.0, -c_ * rs, rs};
}

Mat2 ModifiedMap::inverse_matrix() const {
    const double rs = 1.0 / std::sqrt(s_);
    return {rs, 0.0, c_ * rs, s_ * rs};
}

double ModifiedMap::lift(double theta) const {
    const double j = std::floor((theta + kHalfPi) / kPi);
    const double t0 = theta - j * kPi; // in [-pi/2, pi/2), where cos t0 >= 0
    return j * kPi + std::atan2(std::sin(t0) - c_ * std::cos(t0), s_ * std::cos(t0));
}

double ModifiedMap::inverse_lift(double psi) const {
    const double j = std::floor((psi + kHalfPi) / kPi);
    const double p0 = psi - j * kPi;
    return j * kPi + std::atan2(c_ * std::cos(p0) + s_ * std::sin(p0), std::cos(p0));
}

double ModifiedMap::derivative(double theta) const {
    const double x = std::cos(theta), y = std::sin(theta);
    const double d = y - c_ * x;
    return s_ / (s_ * s_ * x * x + d * d);
}

std::vector<ModifiedPrueferState> modified_pruefer_flow(const JacobiSpec& spec,
                                                        double energy, double alpha,
                                                        int up_to) {
    const ModifiedMap map(energy);
    const auto plain = pruefer_flow(spec, energy, alpha, up_to);
    std::vector<ModifiedPrueferState> states;
    states.reserve(plain.size());
    for (const PrueferState& st : plain) {
        // log |M e_theta| = -log sqrt(derivative)
        const double log_gain = -0.5 * std::log(map.derivative(st.theta));
        states.push_back({st.site, map.lift(st.theta), st.log_radius + log_gain});
    }
    return states;
}

int count_eigenvalues_below(const JacobiSpec& spec, double energy) {
    const int n = spec.size();
    const auto states = pruefer_flow(spec.with_boundary(0.0, kHalfPi), energy, 0.0, n);
    return n - static_cast<int>(std::ceil((states.back().theta - kHalfPi) / kPi));
}

} // namespace specavg
