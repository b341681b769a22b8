/* Fundamental quasinormal mode of the perturbation equation
 *
 *   psi'' = (2/r^2 + V(r) - k^2) psi,   k = Omega - i Gamma,
 *
 * found by two-sided matching: a regular solution grown from the origin
 * (either as the real amplitude-phase pair or as the complex linear
 * equation; both are implemented and must agree) and an outgoing solution
 * brought in through the Riccati equation for the logarithmic derivative
 * g = psi'/psi, seeded where the potential becomes the pure r^-6 tail with
 * the asymptotic series for e^{ikr}(1 + a1/r + ...); for a vanishing tail
 * the series closes at the Riccati-Hankel function (-i + 1/z) e^{iz}.
 */
#pragma once

#include "skyrme/potential.hpp"

#include <complex>

namespace skyrme {

using cdouble = std::complex<double>;

struct QuasinormalMode {
    double Omega = 0.0;
    double Gamma = 0.0;
    double residual = 0.0;   // |g_left - g_right| at the matching radius
    int iterations = 0;
    double r0 = 0.0, R = 0.0;
};

// Log-derivative of the regular solution at r0, integrating the complex
// linear second-order equation from a series launch at the origin.
cdouble origin_log_derivative(const PotentialTable& pot, double Omega, double Gamma,
                              double r0, double dr = 1e-3);

// Same quantity from the real amplitude-phase system
//   -A'' + A p^2 + (2/r^2 + V + Gamma^2 - Omega^2) A = 0,
//    A p' + 2 A' p - 2 Omega Gamma A = 0,   p = phi',
// returning A'/A + i p at r0.
cdouble origin_log_derivative_amp_phase(const PotentialTable& pot, double Omega, double Gamma,
                                        double r0, double dr = 1e-3);

// Log-derivative of the outgoing solution at r for the pure tail potential
// 2/r^2 - v6/r^6, from the asymptotic series in 1/r.
cdouble outgoing_series_log_derivative(cdouble k, double r, double v6);

// Backward Riccati integration g' = -g^2 + 2/r^2 + V - k^2 down to r0.
// The sweep is seeded at the switch radius, where the potential is exactly
// its r^-6 tail and the series above is the outgoing solution; a damped
// mode amplifies any seed contamination by e^{2 Gamma (r_seed - r0)}, so
// the unstable leg is kept as short as the table allows.  The mismatch is
// then the same for every admissible R, which only marks the outer extent
// of the wave zone being represented.
cdouble riccati_log_derivative(const PotentialTable& pot, double Omega, double Gamma,
                               double r0, double R, double dr = 1e-3);

// g_left - g_right at r0; a zero in k marks a mode.
cdouble matching_residual(const PotentialTable& pot, double Omega, double Gamma,
                          double r0 = 8.0, double R = 40.0);

// Newton iteration in complex k with finite-difference derivative.
QuasinormalMode find_qnm(const PotentialTable& pot, double Omega0 = 0.6, double Gamma0 = 0.3,
                         double r0 = 8.0, double R = 40.0, double tol = 1e-10);

// Nodes of the zero-energy regular solution out to R; zero nodes means the
// potential holds no bound state.
int zero_energy_nodes(const PotentialTable& pot, double R = 40.0);

// Late-time decay exponent of the linear field for angular momentum l on a
// potential falling like r^{-beta}: gamma = 2l + beta (needs beta > 3).
double predicted_linear_exponent(int l, double beta);

} // namespace skyrme
