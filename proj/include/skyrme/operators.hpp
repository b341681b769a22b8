/* Fourth-order discrete calculus on radial grids: derivatives, definite
 * integrals, and off-grid interpolation.  Parity ghosts keep the order
 * uniform through r=0; one-sided closures keep it at the outer edge.
 */
#pragma once

#include "skyrme/grid.hpp"

namespace skyrme {

// m-th spatial derivative (m = 1 or 2), 4th-order accurate everywhere.
// The result has flipped parity for m=1 and the input parity for m=2.
ScalarField derivative(const ScalarField& f, int m);

// Integral of f over [r_lo, r_hi] with 4th-order composite rules.
// Off-node endpoints are handled by Gauss panels on interpolated values.
// An empty range (r_lo == r_hi) is defined as 0; an inverted one is an error.
double integral(const ScalarField& f, double r_lo, double r_hi);

// Degree-4 local polynomial interpolation at radius r, parity-aware near
// the origin, stencil shifted inward near r_max.
double interpolate_at(const ScalarField& f, double r);

} // namespace skyrme
