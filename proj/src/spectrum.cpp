#include "skyrme/spectrum.hpp"
#include "skyrme/rk4.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skyrme {

namespace {

constexpr double kOriginLaunch = 1e-3;

double ramp_step(double r, double dr) { return std::clamp(r / 8.0, dr / 10.0, dr); }

// One RK4 step for a complex 2-state system (psi, psi').
template <class Rhs>
void rk4c2(Rhs&& rhs, double r, double dr, cdouble& y0, cdouble& y1) {
    cdouble a0, a1, b0, b1, c0, c1, d0, d1;
    rhs(r, y0, y1, a0, a1);
    rhs(r + 0.5 * dr, y0 + 0.5 * dr * a0, y1 + 0.5 * dr * a1, b0, b1);
    rhs(r + 0.5 * dr, y0 + 0.5 * dr * b0, y1 + 0.5 * dr * b1, c0, c1);
    rhs(r + dr, y0 + dr * c0, y1 + dr * c1, d0, d1);
    y0 += dr / 6.0 * (a0 + 2.0 * b0 + 2.0 * c0 + d0);
    y1 += dr / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1);
}

void check_r0(const PotentialTable& pot, double r0) {
    if (!(r0 > 0.0) || !(r0 < pot.r_switch))
        throw std::invalid_argument("matching radius must lie in (0, r_switch)");
}

} // namespace

cdouble origin_log_derivative(const PotentialTable& pot, double Omega, double Gamma,
                              double r0, double dr) {
    check_r0(pot, r0);
    cdouble k(Omega, -Gamma);
    cdouble k2 = k * k;
    double V0 = pot.value(0.0);

    // Frobenius launch: psi = r^2 (1 + sigma r^2), sigma = (V(0) - k^2)/10.
    cdouble sigma = (V0 - k2) / 10.0;
    double r = kOriginLaunch;
    cdouble psi = r * r * (1.0 + sigma * r * r);
    cdouble dpsi = 2.0 * r + 4.0 * sigma * r * r * r;

    auto rhs = [&](double rr, const cdouble& y0, const cdouble& y1, cdouble& o0, cdouble& o1) {
        o0 = y1;
        o1 = (2.0 / (rr * rr) + pot.value(rr) - k2) * y0;
    };

    while (r0 - r > 1e-12) {
        double step = std::min(ramp_step(r, dr), r0 - r);
        rk4c2(rhs, r, step, psi, dpsi);
        r += step;
        if (!(std::abs(psi) > 0.0))
            throw std::runtime_error("origin_log_derivative: node encountered at r=" + std::to_string(r) + "; invalid for this k");
    }
    return dpsi / psi;
}

cdouble origin_log_derivative_amp_phase(const PotentialTable& pot, double Omega, double Gamma,
                                        double r0, double dr) {
    check_r0(pot, r0);
    double V0 = pot.value(0.0);
    double re_sigma = (V0 - (Omega * Omega - Gamma * Gamma)) / 10.0;
    double im_sigma = 2.0 * Omega * Gamma / 10.0;

    double r = kOriginLaunch;
    // State: A, A', p = phi'.
    std::array<double, 3> y = {r * r * (1.0 + re_sigma * r * r),
                               2.0 * r + 4.0 * re_sigma * r * r * r,
                               2.0 * im_sigma * r};

    auto rhs = [&](double rr, const std::array<double, 3>& s) -> std::array<double, 3> {
        double A = s[0], Ap = s[1], p = s[2];
        if (!(A > 0.0))
            throw std::runtime_error("origin_log_derivative_amp_phase: amplitude node at r=" + std::to_string(rr) + "; invalid for this k");
        double App = A * (p * p + 2.0 / (rr * rr) + pot.value(rr) + Gamma * Gamma - Omega * Omega);
        double pp = 2.0 * Omega * Gamma - 2.0 * (Ap / A) * p;
        return {Ap, App, pp};
    };

    while (r0 - r > 1e-12) {
        double step = std::min(ramp_step(r, dr), r0 - r);
        y = rk4_step(rhs, r, step, y);
        r += step;
    }
    return cdouble(y[1] / y[0], y[2]);
}

cdouble outgoing_series_log_derivative(cdouble k, double R, double v6) {
    // Write psi = e^{ikr} u with u = sum a_n r^{-n} for the exterior
    // potential 2/r^2 - v6/r^6.  The recursion is
    //   a_m = [(m+1)(m-2) a_{m-1} + v6 a_{m-5}] / (2ik m),   a_0 = 1.
    // With v6 = 0 it terminates at the spherical Hankel h1; with v6 on,
    // a_2 = a_3 = a_4 = 0 and the tail re-enters the sum at m = 5, so the
    // stop-on-growth test must not trip on those interior zeros.  The
    // series is asymptotic: sum to the smallest term.  A damped mode needs
    // this seed accurate, because the backward sweep amplifies any ingoing
    // admixture by e^{2 Gamma (r_seed - r0)}.
    cdouble two_ik = 2.0 * cdouble(0.0, 1.0) * k;
    std::array<cdouble, 61> a{};
    a[0] = 1.0;
    cdouble u = 1.0, up = 0.0;
    double prev_term = 0.0;
    double Rn = 1.0;   // R^{-m}
    for (int m = 1; m <= 60; ++m) {
        cdouble am = static_cast<double>((m + 1) * (m - 2)) * a[m - 1];
        if (m >= 5) am += v6 * a[m - 5];
        am /= two_ik * static_cast<double>(m);
        a[m] = am;
        Rn /= R;
        double term = std::abs(am) * Rn;
        if (m > 6 && term > prev_term && prev_term > 0.0) break;
        if (term > 0.0) prev_term = term;
        u += am * Rn;
        up += -static_cast<double>(m) * am * Rn / R;
        if (m > 6 && term < 1e-18 * std::abs(u)) break;
    }
    return cdouble(0.0, 1.0) * k + up / u;
}

cdouble riccati_log_derivative(const PotentialTable& pot, double Omega, double Gamma,
                               double r0, double R, double dr) {
    check_r0(pot, r0);
    if (!(R > pot.r_switch))
        throw std::invalid_argument("riccati_log_derivative: R must exceed r_switch");
    cdouble k(Omega, -Gamma);
    cdouble k2 = k * k;

    // Beyond r_switch the potential is the pure -v6/r^6 tail, for which the
    // outgoing solution is the asymptotic series itself.  Seeding the sweep
    // at r_switch therefore loses nothing over seeding at R, and it keeps
    // the backward leg short: integrating down from large R amplifies seed
    // and roundoff error by e^{2 Gamma (R - r0)}, which already at R = 60
    // swamps a 1e-6 target.  R stays as the stated outer radius; any choice
    // beyond r_switch gives the identical mismatch.
    double r_seed = pot.r_switch;
    cdouble g = outgoing_series_log_derivative(k, r_seed, pot.v6);

    auto rhs = [&](double rr, const cdouble& gg) {
        return -gg * gg + 2.0 / (rr * rr) + pot.value(rr) - k2;
    };

    double r = r_seed;
    while (r - r0 > 1e-12) {
        double step = std::min(dr, r - r0);
        // RK4 on the scalar Riccati equation, integrating downward.
        cdouble a = rhs(r, g);
        cdouble b = rhs(r - 0.5 * step, g - 0.5 * step * a);
        cdouble c = rhs(r - 0.5 * step, g - 0.5 * step * b);
        cdouble d = rhs(r - step, g - step * c);
        g -= step / 6.0 * (a + 2.0 * b + 2.0 * c + d);
        r -= step;
        if (std::abs(g) > 1e6)
            throw std::runtime_error("riccati_log_derivative: pole near r=" + std::to_string(r) + " (|g| blew up); retry with shifted r0");
    }
    return g;
}

cdouble matching_residual(const PotentialTable& pot, double Omega, double Gamma,
                          double r0, double R) {
    return origin_log_derivative(pot, Omega, Gamma, r0) - riccati_log_derivative(pot, Omega, Gamma, r0, R);
}

QuasinormalMode find_qnm(const PotentialTable& pot, double Omega0, double Gamma0,
                         double r0, double R, double tol) {
    cdouble k(Omega0, -Gamma0);
    const double gamma_floor = 1e-4;
    int shifts = 0;

    auto residual_at = [&](cdouble kk) {
        double Om = kk.real(), Ga = -kk.imag();
        return matching_residual(pot, Om, Ga, r0, R);
    };

    // The mismatch has more than one stationary point in the quarter plane
    // (a second, more damped root sits near 0.55 - 0.49i), and a raw Newton
    // step from a rough guess can hop basins.  Treat the guess as "nearest
    // mode wanted": scan a small window around it and start from the best
    // cell, then keep the step length short.
    try {
        if (std::abs(residual_at(k)) > 1e-3) {
            double best = 1e300;
            cdouble kbest = k;
            for (int i = -3; i <= 3; ++i)
                for (int j = -3; j <= 3; ++j) {
                    double Om = Omega0 + 0.02 * i;
                    double Ga = std::max(Gamma0 + 0.02 * j, gamma_floor);
                    cdouble kk(Om, -Ga);
                    double m;
                    try {
                        m = std::abs(residual_at(kk));
                    } catch (const std::runtime_error&) {
                        continue;
                    }
                    if (m < best) { best = m; kbest = kk; }
                }
            k = kbest;
        }
    } catch (const std::runtime_error&) {
        // fall through to the Newton loop, which shifts r0 on poles
    }

    cdouble M;
    int it = 0;
    for (; it < 60; ++it) {
        try {
            M = residual_at(k);
        } catch (const std::runtime_error&) {
            // Pole in the backward sweep: move the matching point and retry.
            if (++shifts > 3) throw;
            r0 += 0.5;
            --it;
            continue;
        }
        if (std::abs(M) < tol) break;
        cdouble delta(1e-7 * (1.0 + std::abs(k)), 0.0);
        cdouble Mp = residual_at(k + delta);
        cdouble dM = (Mp - M) / delta;
        cdouble step = -M / dM;
        if (std::abs(step) > 0.05) step *= 0.05 / std::abs(step);
        k += step;
        if (-k.imag() < gamma_floor) k = cdouble(k.real(), -gamma_floor);
        if (std::abs(step) < 1e-13) { M = residual_at(k); break; }
    }

    QuasinormalMode q;
    q.Omega = k.real();
    q.Gamma = -k.imag();
    q.residual = std::abs(M);
    q.iterations = it;
    q.r0 = r0;
    q.R = R;
    if (!(q.residual < 1e3 * tol))
        throw std::runtime_error("find_qnm: no convergence from (" + std::to_string(Omega0) + ", " + std::to_string(Gamma0)
                                 + "); last k = " + std::to_string(q.Omega) + " - " + std::to_string(q.Gamma)
                                 + " i, |residual| = " + std::to_string(q.residual));
    return q;
}

int zero_energy_nodes(const PotentialTable& pot, double R) {
    // Real regular solution at k^2 = 0; Sturm: node count equals the number
    // of negative-energy bound states below.
    double V0 = pot.value(0.0);
    double sigma = V0 / 10.0;
    double r = kOriginLaunch;
    std::array<double, 2> y = {r * r * (1.0 + sigma * r * r), 2.0 * r + 4.0 * sigma * r * r * r};
    auto rhs = [&](double rr, const std::array<double, 2>& s) -> std::array<double, 2> {
        return {s[1], (2.0 / (rr * rr) + pot.value(rr)) * s[0]};
    };
    int nodes = 0;
    double prev = y[0];
    while (R - r > 1e-12) {
        double step = std::min(ramp_step(r, 1e-3), R - r);
        y = rk4_step(rhs, r, step, y);
        r += step;
        if (prev != 0.0 && y[0] * prev < 0.0) ++nodes;
        prev = y[0];
        // Keep the magnitude tame; rescaling does not move nodes.
        if (std::fabs(y[0]) > 1e200) { y[0] *= 1e-200; y[1] *= 1e-200; prev *= 1e-200; }
    }
    return nodes;
}

double predicted_linear_exponent(int l, double beta) {
    if (l < 0) throw std::invalid_argument("predicted_linear_exponent: l must be non-negative");
    if (!(beta > 3.0))
        throw std::invalid_argument("predicted_linear_exponent: potential tail must fall faster than r^-3");
    return 2.0 * l + beta;
}

} // namespace skyrme
