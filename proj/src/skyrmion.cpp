#include "skyrme/skyrmion.hpp"

#include "skyrme/rk4.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skyrme {

double static_rhs(double r, double S, double Sp) {
    if (!(r > 0.0)) throw std::invalid_argument("static_rhs: needs r > 0 (series launch handles the origin)");
    double sinS = std::sin(S);
    double sin2S = std::sin(2.0 * S);
    double w = r * r + 2.0 * sinS * sinS;
    double num = sin2S * (1.0 + sinS * sinS / (r * r) + Sp * Sp) - (2.0 * r + 2.0 * sin2S * Sp) * Sp;
    return num / w;
}

namespace {

constexpr double kLaunchR = 1e-4;
constexpr double kStepMax = 1e-3;
constexpr double kStepMin = 2e-5;

// Step ramp: fine steps while r is small (the sin^2 S / r^2 combination is
// finite but steep to resolve), a fixed fine step elsewhere.
double step_for(double r) { return std::clamp(r / 16.0, kStepMin, kStepMax); }

std::array<double, 2> ode(double r, const std::array<double, 2>& y) {
    return {y[1], static_rhs(r, y[0], y[1])};
}

// Advance (S, S') from r to r_target with the ramped RK4 substeps.
void advance(double& r, std::array<double, 2>& y, double r_target) {
    while (r < r_target) {
        double dr = std::min(step_for(r), r_target - r);
        y = rk4_step(ode, r, dr, y);
        r += dr;
    }
}

} // namespace

ShotOutcome shoot(double b_trial, double r_stop) {
    if (!(b_trial > 0.0)) throw std::invalid_argument("shoot: trial slope must be positive");
    double r = kLaunchR;
    std::array<double, 2> y = {b_trial * r, b_trial};
    const double pi = M_PI;

    while (r < r_stop) {
        double dr = std::min(step_for(r), r_stop - r);
        std::array<double, 2> ynext;
        try {
            ynext = rk4_step(ode, r, dr, y);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("shoot: blow-up near r=" + std::to_string(r) + " (b=" + std::to_string(b_trial) + "): " + e.what());
        }
        r += dr;
        y = ynext;
        if (y[0] > pi && y[1] > 0.0) return {ShotClass::overshoot, r, y[0], y[1]};
        // A maximum can only form with S in (pi/2, pi); once S' goes
        // negative there the trajectory decays back toward 0.
        if (y[1] < 0.0 && y[0] < pi) return {ShotClass::undershoot, r, y[0], y[1]};
    }
    // Reached r_stop with neither event.  About S = pi the tail is
    // u = A r + B / r^2 (u = pi - S), and  u' + 2 u / r = 3 A  with the
    // decaying mode cancelling identically.  The sign of A says which way
    // the trajectory will eventually break, long before it visibly does,
    // so the bisection stays sharp down to machine precision in b.
    double m = -y[1] + 2.0 * (pi - y[0]) / r;
    if (std::fabs(m) < 1e-9 && pi - y[0] > 0.0)
        return {ShotClass::converged, r, y[0], y[1]};
    return {m < 0.0 ? ShotClass::overshoot : ShotClass::undershoot, r, y[0], y[1]};
}

void sample_skyrmion(double b, const RadialGrid& g, ScalarField& S_out, ScalarField& Sp_out) {
    if (g.staggered) throw std::invalid_argument("sample_skyrmion: vertex grid required");
    S_out = ScalarField(g, Parity::odd);
    Sp_out = ScalarField(g, Parity::even);
    S_out.v[0] = 0.0;
    Sp_out.v[0] = b;

    double r = kLaunchR;
    std::array<double, 2> y = {b * r, b};
    for (std::size_t i = 1; i < g.n; ++i) {
        advance(r, y, g.r(i));
        S_out.v[i] = y[0];
        Sp_out.v[i] = y[1];
    }
}

FarFit extract_far_coefficient(const ScalarField& S, double r_far) {
    const auto& g = S.grid;
    // Linear least squares of y = (pi - S) r^2 against x = 1/r^2.
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double r = g.r(i);
        if (r < r_far) continue;
        double x = 1.0 / (r * r);
        double yv = (M_PI - S.v[i]) * r * r;
        sx += x; sxx += x * x; sy += yv; sxy += x * yv;
        ++m;
    }
    if (m < 10) throw std::invalid_argument("extract_far_coefficient: outer region too short (" + std::to_string(m) + " points past r=" + std::to_string(r_far) + ")");
    double denom = static_cast<double>(m) * sxx - sx * sx;
    FarFit fit;
    fit.d = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.c = (sy - fit.d * sx) / static_cast<double>(m);
    fit.points = m;
    return fit;
}

StaticProfile solve_skyrmion(double tolerance, double h, double r_max) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("solve_skyrmion: tolerance must be positive");
    if (r_max < 50.0) throw std::invalid_argument("solve_skyrmion: need r_max >= 50 for the far-field fit");

    double lo = 0.1, hi = 10.0;
    auto lo_cls = shoot(lo, r_max).cls;
    auto hi_cls = shoot(hi, r_max).cls;
    if (lo_cls != ShotClass::undershoot || hi_cls != ShotClass::overshoot)
        throw std::runtime_error("solve_skyrmion: initial bracket [0.1, 10] does not straddle the solution (lo="
                                 + std::to_string(static_cast<int>(lo_cls)) + ", hi=" + std::to_string(static_cast<int>(hi_cls)) + ")");

    // Bisection on the tail-breakout sign; a midpoint whose growing-mode
    // amplitude already sits below the classifier floor ends the search.
    double b = 0.5 * (lo + hi);
    bool settled = false;
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        auto out = shoot(mid, r_max);
        if (out.cls == ShotClass::converged) { b = mid; settled = true; break; }
        if (out.cls == ShotClass::overshoot) hi = mid;
        else lo = mid;
        b = 0.5 * (lo + hi);
    }

    if (!settled) {
        auto final_shot = shoot(b, r_max);
        if (final_shot.cls != ShotClass::converged)
            throw std::runtime_error("solve_skyrmion: midpoint slope failed to settle (S_end=" + std::to_string(final_shot.S_end) + ", S'_end=" + std::to_string(final_shot.Sp_end) + " at r=" + std::to_string(final_shot.r_end) + ")");
    }

    StaticProfile prof;
    prof.b = b;
    prof.bracket = hi - lo;
    auto g = make_grid(h, r_max);
    sample_skyrmion(b, g, prof.S, prof.Sp);
    auto fit = extract_far_coefficient(prof.S, 20.0);
    prof.c = fit.c;
    return prof;
}

} // namespace skyrme
