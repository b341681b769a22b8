/* Long-time evolution of the radial field equation, plus its linearization.
 *
 * The nonlinear equation is integrated by method of lines: 4th-order
 * spatial stencils from operators.hpp and classical RK4 in time, first
 * order in time via the momentum P = w dF/dt with w = r^2 + 2 sin^2 F.
 * P is also the natural quantity to watch at a fixed radius, since it is
 * what carries the ringdown and tail signal without the 1/r^2 static
 * background.
 *
 * There is no outgoing boundary condition.  Instead the grid is sized so
 * that no signal launched from the initial data can reach the outer edge
 * and return to any observer before the run ends (causal isolation);
 * evolve() refuses configurations that violate this.  Tail amplitudes of
 * order 1e-10 would not survive even a fraction of a percent of boundary
 * reflection, and a longer grid is cheaper than a better absorber.  The
 * outermost few rows are held at their initial values rather than evolved:
 * nothing physical ever reaches them, and the one-sided stencil rows are
 * not stable as an evolution scheme.
 *
 * The spatial sweep exists twice: a fused OpenMP kernel used in
 * production and a serial reference built from the derivative() operator,
 * kept because the two must agree exactly and the reference is obviously
 * right.
 */
#pragma once

#include "skyrme/grid.hpp"
#include "skyrme/potential.hpp"

#include <string>
#include <vector>

namespace skyrme {

// Instantaneous field state.  F is the radial profile (odd across the
// origin, F(t,0) = 0), P = w dF/dt the evolved momentum.  support is the
// radius beyond which the *dynamic* part of the data vanishes; for
// degree-1 data the static 1/r^2 tail extends further but does not
// radiate, so it does not count.
struct FieldState {
    double t = 0.0;
    ScalarField F;
    ScalarField P;
    double support = 0.0;
};

// Energy split into the quadratic (sigma model) piece and the quartic
// (Skyrme) piece; both are separately non-negative and only the sum is
// conserved.
struct EnergyBreakdown {
    double sigma = 0.0;
    double skyrme = 0.0;
    double total = 0.0;
};

enum class Quantity { F, P, F_minus_reference };

// A fixed-radius probe sampled at the given cadence by interpolation in
// space and linearly in time.  For F_minus_reference the stored reference
// value (e.g. the static profile at that radius) is subtracted, which is
// how a ringdown toward an attractor becomes visible.
struct ObserverSpec {
    double radius = 10.0;
    double cadence = 0.1;
    Quantity what = Quantity::P;
    double reference = 0.0;
    std::string label;
};

struct EvolveResult {
    FieldState state;
    std::vector<TimeSeries> observers;
    TimeSeries energy_sigma;
    TimeSeries energy_skyrme;
    TimeSeries energy_total;
};

// Time derivatives (dF/dt, dP/dt) of the evolution system,
//   dF/dt = P / w
//   dP/dt = (w F')' - sin 2F (1 + sin^2 F / r^2 + F'^2 - (P/w)^2),
// written into dF, dP (resized/retyped as needed).  Both derivatives
// vanish at r = 0 by parity.  The plain version is the fused parallel
// kernel; _reference composes derivative() calls and is serial.  They
// agree bitwise.
void nonlinear_rhs(const FieldState& s, ScalarField& dF, ScalarField& dP);
void nonlinear_rhs_reference(const FieldState& s, ScalarField& dF, ScalarField& dP);

EnergyBreakdown energy(const FieldState& s);

// Initial data families.  degree0_gaussian_cubed: F = A r^3 exp(-r^2),
// P = 0, shrinking to vacuum.  degree1_perturbed_skyrmion: the static
// profile with origin slope b plus a localized bump A r^3 exp(-(r-rho)^2),
// P = 0, keeping F(infinity) = pi.
enum class DataFamily { degree0_gaussian_cubed, degree1_perturbed_skyrmion };

struct DataParams {
    double A = 0.0;
    double rho = 3.0;
    double b = 0.0;  // static profile origin slope, degree-1 family only
};

FieldState make_initial_data(DataFamily family, const DataParams& par, const RadialGrid& g);

// Wrap caller-built fields after checking regularity at the origin, a
// clean topological degree at the outer edge, and parity bookkeeping.
FieldState make_custom_data(ScalarField F, ScalarField P, double support);

// Integrate to the absolute time t_max (so a returned state can be fed
// back in to continue a run).  Rejected at configuration time: dt above
// the CFL bound 0.5 h, and grids too short for causal isolation,
// r_max >= t_max + max observer radius + support.  Energy is recorded at
// the finest observer cadence.
EvolveResult evolve(const FieldState& initial, double t_max, double dt,
                    const std::vector<ObserverSpec>& observers);

// Linearized evolution about the static profile (or about vacuum when
// pot is null):  d2v/dt2 = v'' - 2 v / r^2 - V v,  the l = 1 radial wave
// equation.  v is even with v(0) = 0 (regular solutions start at r^2).
// Returns the observer series; the full final state is not needed by any
// caller.
TimeSeries evolve_linear(const ScalarField& v0, const ScalarField& vdot0,
                         const PotentialTable* pot, double t_max, double dt,
                         const ObserverSpec& obs);

} // namespace skyrme
