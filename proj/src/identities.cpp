#include "specavg/identities.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "specavg/green.hpp"
#include "specavg/jacobi.hpp"
#include "specavg/pruefer.hpp"
#include "specavg/quadrature.hpp"
#include "specavg/rng.hpp"

namespace specavg {

namespace {

double uniform_in(SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_unit_uniform();
}

JacobiSpec draw_spec(SplitMix64& rng, int max_sites, double t_lo, double t_hi,
                     double v_lo, double v_hi) {
    const int n = 1 + static_cast<int>(rng.next_unit_uniform() * max_sites);
    std::vector<double> v(static_cast<std::size_t>(n));
    std::vector<double> t(static_cast<std::size_t>(n - 1));
    for (double& x : v)
        x = uniform_in(rng, v_lo, v_hi);
    for (double& x : t)
        x = uniform_in(rng, t_lo, t_hi);
    return JacobiSpec(std::move(v), std::move(t));
}

Complex draw_z(SplitMix64& rng) {
    return {uniform_in(rng, -2.5, 2.5), uniform_in(rng, 0.3, 1.5)};
}

double rel_residual(Complex got, Complex want) {
    const double scale = std::max(std::abs(got), std::abs(want));
    return scale > 0.0 ? std::abs(got - want) / scale : 0.0;
}

void fold_in(IdentityCheck& check, double residual) {
    check.max_residual = std::max(check.max_residual, residual);
}

void finish(std::vector<IdentityCheck>& checks) {
    for (IdentityCheck& c : checks)
        c.pass = c.max_residual <= c.tolerance;
}

} // namespace

std::vector<IdentityCheck> green_identity_battery(int n_specs, int energies_per_spec,
                                                  std::uint64_t seed) {
    if (n_specs < 1 || energies_per_spec < 1)
        throw std::invalid_argument("green_identity_battery: need at least one case");
    std::vector<IdentityCheck> checks = {
        {"wronskian", 0.0, 1e-10, false},
        {"green_transfer_edge", 0.0, 1e-10, false},
        {"green_transfer_first", 0.0, 1e-10, false},
        {"green_transfer_last", 0.0, 1e-10, false},
        {"green_boundary", 0.0, 1e-10, false},
        {"beta_average", 0.0, 1e-8, false},
    };
    SplitMix64 rng(seed);
    for (int s = 0; s < n_specs; ++s) {
        const JacobiSpec spec = draw_spec(rng, 12, 0.5, 2.0, -2.0, 2.0);
        const int n = spec.size();
        const double alpha = uniform_in(rng, -1.2, 1.2);
        const double beta = uniform_in(rng, 0.3, kPi - 0.3);
        const JacobiSpec folded = spec.with_boundary(alpha, beta);
        for (int e = 0; e < energies_per_spec; ++e) {
            const Complex z = draw_z(rng);

            const TransferMatrix t = transfer_product(spec, z, n, 0);
            const Wavefunction phi = solve_schrodinger(spec, z, n);
            Complex norm2 = 0.0;
            for (int j = 1; j <= n; ++j)
                norm2 += std::norm(phi.phi(j));
            const Complex lhs = t.a * std::conj(t.c) - std::conj(t.a) * t.c;
            const Complex rhs = (z - std::conj(z)) * norm2;
            fold_in(checks[0], std::abs(lhs - rhs) / std::abs(rhs));

            const auto from_transfer = green_from_transfer(spec, z);
            fold_in(checks[1], rel_residual(from_transfer[0], green_direct(spec, z, 1, n)));
            fold_in(checks[2], rel_residual(from_transfer[1], green_direct(spec, z, 1, 1)));
            fold_in(checks[3], rel_residual(from_transfer[2], green_direct(spec, z, n, n)));

            fold_in(checks[4],
                    rel_residual(green_boundary(folded, z), green_direct(folded, z, 1, 1)));

            const Complex closed = beta_averaged_green(spec, z, alpha);
            const Complex quad =
                adaptive_gauss_kronrod_complex(
                    [&](double b) {
                        return green_boundary(spec.with_boundary(alpha, b), z, 0.0);
                    },
                    0.0, kPi, 1e-11)
                    .value /
                kPi;
            fold_in(checks[5], rel_residual(closed, quad));
        }
    }
    finish(checks);
    return checks;
}

IdentityCheck alpha_average_battery(int cases, std::uint64_t seed) {
    if (cases < 1)
        throw std::invalid_argument("alpha_average_battery: need at least one case");
    IdentityCheck check{"alpha_average", 0.0, 1e-8, false};
    SplitMix64 rng(seed);
    for (int c = 0; c < cases; ++c) {
        for (int attempt = 0;; ++attempt) {
            const JacobiSpec spec = draw_spec(rng, 30, 0.85, 1.15, -0.4, 0.4);
            const int n = 1 + static_cast<int>(rng.next_unit_uniform() * spec.size());
            const double energy = uniform_in(rng, -1.8, 1.8);
            const AlphaAverageResult avg = alpha_average_inverse_r2(spec, energy, n, 1e-12);
            if (avg.condition_warning && attempt < 100)
                continue; // quadrature cannot resolve such a peak; redraw
            fold_in(check, std::abs(avg.value - 1.0));
            break;
        }
    }
    check.pass = check.max_residual <= check.tolerance;
    return check;
}

std::vector<IdentityCheck> phase_derivative_battery(int cases, std::uint64_t seed) {
    if (cases < 1)
        throw std::invalid_argument("phase_derivative_battery: need at least one case");
    std::vector<IdentityCheck> checks = {
        {"phase_derivative_energy", 0.0, 1e-6, false},
        {"phase_derivative_potential", 0.0, 1e-6, false},
    };
    SplitMix64 rng(seed);
    const auto final_phase = [](const JacobiSpec& spec, double energy, double alpha, int n) {
        return pruefer_flow(spec, energy, alpha, n).back().theta;
    };
    // Rounding noise in the flow (~1e-13 per phase) makes a plain h=1e-6
    // quotient too coarse for a 1e-6 check, so extrapolate wider stencils and
    // halve the step until two successive quotients agree. Near a resonance
    // the phase climbs by pi over a width ~pi/|d|; a draw whose stencil cannot
    // be fit between that width and the rounding floor is redrawn.
    const auto central = [](const auto& f, double h) { return (f(h) - f(-h)) / (2.0 * h); };
    const auto fd_estimate = [&](const auto& f, double d_scale, double& out) -> bool {
        const double scale = std::max(std::abs(d_scale), 1e-2);
        const double h_floor = 2e-6 / scale; // keeps quotient rounding ~5e-8 relative
        for (double h = std::min(2e-4, 0.02 / scale); h >= h_floor; h *= 0.25) {
            const double coarse = central(f, h);
            const double fine = central(f, 0.5 * h);
            if (std::abs(fine - coarse) <=
                3e-5 * std::max(std::abs(fine), std::abs(coarse))) {
                out = (4.0 * fine - coarse) / 3.0;
                return true;
            }
        }
        return false;
    };
    for (int c = 0; c < cases; ++c) {
        for (int attempt = 0;; ++attempt) {
            const JacobiSpec spec = draw_spec(rng, 12, 0.5, 2.0, -2.0, 2.0);
            const int n = spec.size();
            const double energy = uniform_in(rng, -3.0, 3.0);
            const double alpha = uniform_in(rng, 0.0, kPi);
            const int site = 1 + static_cast<int>(rng.next_unit_uniform() * n);

            const double d_energy = phase_derivative_energy(spec, energy, alpha, n);
            const double d_site = phase_derivative_potential(spec, energy, alpha, n, site);
            if ((std::abs(d_energy) < 1e-2 || std::abs(d_site) < 1e-2) && attempt < 100)
                continue; // difference quotient has no relative accuracy here

            double fd_energy = 0.0, fd_site = 0.0;
            const double base = spec.potential(site);
            const bool energy_ok = fd_estimate(
                [&](double dh) { return final_phase(spec, energy + dh, alpha, n); }, d_energy,
                fd_energy);
            const bool site_ok = fd_estimate(
                [&](double dh) {
                    return final_phase(spec.with_potential(site, base + dh), energy, alpha, n);
                },
                d_site, fd_site);
            if (!(energy_ok && site_ok) && attempt < 100)
                continue;
            fold_in(checks[0], std::abs(d_energy - fd_energy) /
                                   std::max(std::abs(d_energy), std::abs(fd_energy)));
            fold_in(checks[1], std::abs(d_site - fd_site) /
                                   std::max(std::abs(d_site), std::abs(fd_site)));
            break;
        }
    }
    finish(checks);
    return checks;
}

std::vector<IdentityCheck> run_identity_battery(int n_specs, int energies_per_spec,
                                                std::uint64_t seed) {
    std::vector<IdentityCheck> all = green_identity_battery(n_specs, energies_per_spec, seed);
    all.push_back(alpha_average_battery(std::max(50, n_specs / 2), derive_seed(seed, 1)));
    const auto derivatives = phase_derivative_battery(n_specs, derive_seed(seed, 2));
    all.insert(all.end(), derivatives.begin(), derivatives.end());
    return all;
}

} // namespace specavg
