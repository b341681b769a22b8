#include "skyrme/potential.hpp"

#include "skyrme/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skyrme {

double effective_potential(double a) {
    double a2 = a * a;
    double a4 = a2 * a2;
    double denom = 1.0 + 2.0 * a2;
    return -4.0 * a2 * (1.0 + 3.0 * a2 + 3.0 * a4) / (denom * denom);
}

namespace {

// Allocation-free 5-point Lagrange interpolation on a uniform vertex grid,
// used on the hot path of the mode integrations.  Near the ends it defers
// to the general parity-aware routine.
double interp5_fast(const ScalarField& f, double r) {
    const auto& g = f.grid;
    long near = static_cast<long>(std::llround(r / g.h));
    if (near < 3 || near + 3 >= static_cast<long>(g.n)) return interpolate_at(f, r);
    double s = (r - g.r(near)) / g.h; // in [-1/2, 1/2]
    // Lagrange basis on offsets -2..2.
    double sm2 = s + 2.0, sm1 = s + 1.0, sp1 = s - 1.0, sp2 = s - 2.0;
    double w0 = sm2 * sm1 * sp1 * sp2 / 4.0;
    double wm2 = sm1 * s * sp1 * sp2 / 24.0;
    double wm1 = -sm2 * s * sp1 * sp2 / 6.0;
    double wp1 = -sm2 * sm1 * s * sp2 / 6.0;
    double wp2 = sm2 * sm1 * s * sp1 / 24.0;
    std::size_t i = static_cast<std::size_t>(near);
    return wm2 * f.v[i - 2] + wm1 * f.v[i - 1] + w0 * f.v[i] + wp1 * f.v[i + 1] + wp2 * f.v[i + 2];
}

} // namespace

double PotentialTable::value(double r) const {
    if (!(r >= 0.0)) throw std::invalid_argument("PotentialTable::value: negative radius");
    if (r >= r_switch) {
        double r2 = r * r;
        return -v6 / (r2 * r2 * r2);
    }
    return interp5_fast(V, r);
}

PotentialTable build_potential(const StaticProfile& prof, double r_switch) {
    const auto& g = prof.S.grid;
    if (prof.S.v.size() < 8 || !(prof.b > 0.0))
        throw std::invalid_argument("build_potential: profile not converged (empty or non-positive slope)");
    if (r_switch >= g.r_max())
        throw std::invalid_argument("build_potential: r_switch beyond the sampled profile");
    // A converged degree-1 profile ends on a c/r^2 tail with c of order 2;
    // anything else signals an unconverged or foreign field.
    double r_end = g.r_max();
    double tail = (M_PI - prof.S.v.back()) * r_end * r_end;
    if (!(tail > 0.05) || !(tail < 100.0))
        throw std::invalid_argument("build_potential: profile does not end on a far-field tail (pi - S scaled: " + std::to_string(tail) + ")");

    PotentialTable tab;
    tab.r_switch = r_switch;
    tab.a0 = prof.b;
    tab.V = ScalarField(g, Parity::even);
    tab.V.v[0] = effective_potential(prof.b);
    for (std::size_t i = 1; i < g.n; ++i) {
        double r = g.r(i);
        double a = std::sin(prof.S.v[i]) / r;
        tab.V.v[i] = effective_potential(a);
    }

    // Match the analytic branch to the table at the switch radius.  The
    // matched constant equals 4 c^2 up to the subleading tail of S
    // (relative difference ~1e-6 at r_switch = 25).
    double vtab = interp5_fast(tab.V, r_switch);
    double r2 = r_switch * r_switch;
    tab.v6 = -vtab * r2 * r2 * r2;
    return tab;
}

} // namespace skyrme
