/* The static hedgehog profile S(r): shooting from a series launch at the
 * origin, bisection on the initial slope, and far-field read-off.
 *
 * S solves  (w S')' = sin(2S) (1 + sin^2 S / r^2 + S'^2),  w = r^2 + 2 sin^2 S,
 * with S(0)=0, S(inf)=pi.  Near the origin S ~ b r; at large radius
 * S ~ pi - c/r^2.
 */
#pragma once

#include "skyrme/grid.hpp"

#include <cstddef>

namespace skyrme {

enum class ShotClass { undershoot, overshoot, converged };

struct ShotOutcome {
    ShotClass cls;
    double r_end;   // where integration stopped (turning point, crossing, or r_stop)
    double S_end;
    double Sp_end;
};

struct FarFit {
    double c = 0.0;  // leading  (pi - S) ~ c / r^2
    double d = 0.0;  // fitted subleading coefficient in the 1/r^2 regression
    std::size_t points = 0;
};

struct StaticProfile {
    double b = 0.0;           // origin slope
    double c = 0.0;           // far-field coefficient
    double bracket = 0.0;     // final bisection bracket width
    ScalarField S;            // odd samples, S(0)=0
    ScalarField Sp;           // even samples of S'
};

// Right-hand side of the time-independent equation, solved for S''.
double static_rhs(double r, double S, double Sp);

// Integrate one trial slope out to r_stop and classify the trajectory.
ShotOutcome shoot(double b_trial, double r_stop = 50.0);

// Sample the profile with slope b on a vertex grid by integrating the same
// ODE through every node (no splicing against an asymptotic form).
void sample_skyrmion(double b, const RadialGrid& g, ScalarField& S_out, ScalarField& Sp_out);

// Full solve: bisection to the requested bracket width, sampling, far fit.
StaticProfile solve_skyrmion(double tolerance = 1e-13, double h = 0.01, double r_max = 50.0);

// Fit (pi - S) r^2 = c + d / r^2 over r >= r_far by linear least squares.
FarFit extract_far_coefficient(const ScalarField& S, double r_far = 20.0);

} // namespace skyrme
