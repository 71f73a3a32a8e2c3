#pragma once

#include <array>

#include "specavg/jacobi.hpp"

namespace specavg {

/// Resolvent entry G(z; n, m) = <n|(H - z)^{-1}|m> of the boundary-folded
/// window operator, 1-based sites. For Im z > 0 the tridiagonal system is
/// eliminated without pivoting (every pivot has imaginary part <= -Im z, so
/// this is stable and keeps small entries relatively accurate); Im z < 0 is
/// handled by conjugation; real z uses a pivoted dense solve after checking
/// the distance to the spectrum.
Complex green_direct(const JacobiSpec& spec, Complex z, int n, int m,
                     double pole_guard = kDefaultPoleGuard);

/// The three resolvent entries (G(z,1,N), G(z,1,1), G(z,N,N)) of the
/// Dirichlet operator (alpha = 0, beta = pi/2), read off the entries
/// a, b, c, d of the transfer product across the window as
/// (-1/a, b/a, -c/a). Requires the spec's angles to be Dirichlet.
std::array<Complex, 3> green_from_transfer(const JacobiSpec& spec, Complex z);

/// G(z,1,1) of the boundary-folded operator, from the Dirichlet-background
/// transfer entries:
///   (b - d cot(beta)) / (a + b tan(alpha) - c cot(beta) - d tan(alpha) cot(beta)).
/// Evaluated in the projectively equivalent form
///   cos(alpha) (b sin(beta) - d cos(beta)) /
///     (sin(beta)(a cos(alpha) + b sin(alpha)) - cos(beta)(c cos(alpha) + d sin(alpha)))
/// which stays finite through the angle poles, so a pole_guard of 0 admits
/// every angle. Throws degenerate_boundary_error when the denominator
/// vanishes.
Complex green_boundary(const JacobiSpec& spec, Complex z,
                       double pole_guard = kDefaultPoleGuard);

/// Average over beta in (0, pi) of green_boundary at fixed alpha, in closed
/// form: (b + i d) / ((a + b tan(alpha)) + i (c + d tan(alpha))). Requires
/// Im z > 0.
Complex beta_averaged_green(const JacobiSpec& spec, Complex z, double alpha,
                            double pole_guard = kDefaultPoleGuard);

/// Density at real energy E of the beta-averaged spectral measure at site 1:
///   (1/pi) / ((a + b tan(alpha))^2 + (c + d tan(alpha))^2)
/// with the real transfer entries at E. Integrates to 1 over the real line.
double beta_averaged_density(const JacobiSpec& spec, double energy, double alpha,
                             double pole_guard = kDefaultPoleGuard);

} // namespace specavg
