/* Third-order perturbation theory for the zero-degree sector.
 *
 * Time-symmetric small data F(0,r) = g(r), dF/dt(0,r) = 0 launches a free
 * l=1 wave F1 determined by one odd generating function a(u):
 *
 *   F1(t,r) = [a'(t-r) + a'(t+r)]/r + [a(t-r) - a(t+r)]/r^2,
 *
 * with a recovered from g by integrating d/dr(a/r) = g/2 inward from
 * infinity.  The quadratic order vanishes identically, so the first
 * correction is cubic: F3 solves the same wave equation with source
 * (4/3) F1^3/r^2 and is given by a retarded Green's function integral
 * over the past light cone.  In null coordinates u = t'-r', v = t'+r'
 * the source at (u,v) involves only a and a' at u and v, and for an
 * observer behind the outgoing pulse (t - r beyond the data support)
 * the integration domain collapses to a rectangle where the kernel is
 * smooth.  At late times the whole memory of the data condenses into
 * one number,
 *
 *   F3(t,r) -> c r t^-5,   c = -(64/9) integral of a'(u)^3 du,
 *
 * which is what the long nonlinear evolutions should relax to.
 */
#pragma once

#include "skyrme/grid.hpp"
#include "skyrme/operators.hpp"

#include <functional>

namespace skyrme {

struct GeneratingFunction {
    RadialGrid grid;    // u-grid covering [0, u_cap]
    ScalarField a;      // odd in u
    ScalarField ap;     // da/du, even in u
    ScalarField appp;   // d^3a/du^3, even; used by the small-r series
    double u_max = 0.0; // beyond this |a| and |a'| are below 1e-14 of peak

    // Table lookups extended to the whole line by parity, zero beyond
    // the tabulated range.
    double eval_a(double u) const;
    double eval_ap(double u) const;
};

struct TailPrediction {
    double c = 0.0;  // coefficient of the r t^-5 asymptotic law
    double predict(double t, double r) const { return c * r / std::pow(t, 5.0); }
};

struct ConvolveResult {
    double value = 0.0;
    double error = 0.0;  // quadrature refinement estimate
};

// Generating function from time-symmetric initial data g(r).  g must be
// smooth, vanish at the origin like r^3, and decay effectively compactly;
// data that has not decayed by the probe horizon is rejected.
GeneratingFunction invert_initial_data(const std::function<double(double)>& g);

// The free wave F1 at one spacetime point; even in t, odd under r -> -r,
// regular at the origin (series takes over at very small r).
double free_wave_eval(const GeneratingFunction& a, double t, double r);

// F1^3 at the point with null coordinates (u, v), the integrand factor of
// the light-cone convolution.  Requires u <= v.
double third_order_source(const GeneratingFunction& a, double u, double v);

// The third-order field F3(t,r) by 2-D quadrature over the past light
// cone.  The refinement error estimate must meet tol, else this throws
// with the achieved error in the message.
ConvolveResult green_convolve(const GeneratingFunction& a, double t, double r,
                              double tol = 1e-8);

// The late-time tail coefficient c = -(64/9) integral a'^3 du.
TailPrediction asymptotic_coefficient(const GeneratingFunction& a);

} // namespace skyrme
