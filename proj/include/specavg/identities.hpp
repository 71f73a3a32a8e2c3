#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specavg {

struct IdentityCheck {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Randomized residual battery for the transfer-matrix identities: the
/// Wronskian summation identity, the three resolvent entries read off the
/// transfer product, the boundary-condition formula, and the closed-form
/// beta average against adaptive quadrature. Specs have up to 12 sites,
/// hoppings in [0.5, 2], potentials in [-2, 2]; energies sit in the upper
/// half-plane.
std::vector<IdentityCheck> green_identity_battery(int n_specs, int energies_per_spec,
                                                  std::uint64_t seed);

/// Randomized check that the alpha average of 1/R_N^2 is 1. Cases are drawn
/// with mild coefficients (condition number of the squared transfer product
/// below the warning threshold), or the quadrature could not resolve the
/// peak at all.
IdentityCheck alpha_average_battery(int cases, std::uint64_t seed);

/// Analytic phase derivatives against central finite differences (step
/// 1e-6), both the energy and the single-potential variant. Cases where the
/// derivative nearly vanishes are redrawn: the difference quotient carries
/// no relative accuracy there.
std::vector<IdentityCheck> phase_derivative_battery(int cases, std::uint64_t seed);

/// All of the above, concatenated; what the experiment runner tabulates.
std::vector<IdentityCheck> run_identity_battery(int n_specs, int energies_per_spec,
                                                std::uint64_t seed);

} // namespace specavg
