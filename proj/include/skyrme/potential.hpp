/* Effective potential for linear perturbations riding on the Skyrmion.
 *
 * With a(r) = sin S / r the potential is
 *   V(r) = -4 a^2 (1 + 3 a^2 + 3 a^4) / (1 + 2 a^2)^2,
 * finite at the origin (a(0) = b) and falling off like -v6 / r^6 with
 * v6 = 4 c^2.  Beyond r_switch the table hands over to the analytic tail,
 * matched at the switch radius so the handover is continuous.
 */
#pragma once

#include "skyrme/grid.hpp"
#include "skyrme/skyrmion.hpp"

namespace skyrme {

double effective_potential(double a);

struct PotentialTable {
    ScalarField V;          // tabulated on the profile grid (even parity)
    double r_switch = 25.0;
    double v6 = 0.0;        // analytic-tail coefficient, continuity-matched
    double a0 = 0.0;        // a(0) = b

    // V at arbitrary radius: interpolated table below r_switch, analytic
    // -v6/r^6 beyond it (valid for any larger r, e.g. Riccati seeds).
    double value(double r) const;
};

PotentialTable build_potential(const StaticProfile& prof, double r_switch = 25.0);

} // namespace skyrme
