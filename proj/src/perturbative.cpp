/* Generating function, free wave, and light-cone convolution. */
#include "skyrme/perturbative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skyrme {

namespace {

constexpr double kTableSpacing = 0.0025;
constexpr double kProbeHorizon = 40.0;  // how far out decay is demanded

/* 3-point Gauss panel of a callable on [x0, x1]; order 6, plenty for the
 * smooth profiles this module sees. */
double gauss3(const std::function<double(double)>& f, double x0, double x1) {
    static const double q = std::sqrt(0.6);
    double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
    return half * ((5.0 / 9.0) * f(mid - half * q) + (8.0 / 9.0) * f(mid) + (5.0 / 9.0) * f(mid + half * q));
}

struct Gauss5 {
    double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                   0.5384693101056831, 0.9061798459386640};
    double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                   0.4786286704993665, 0.2369268850561891};
};

double table_peak(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

double GeneratingFunction::eval_a(double u) const {
    double x = std::abs(u);
    if (x >= grid.r_max() - 2.0 * grid.h) return 0.0;
    double val = interpolate_at(a, x);
    return (u < 0.0) ? -val : val;
}

double GeneratingFunction::eval_ap(double u) const {
    double x = std::abs(u);
    if (x >= grid.r_max() - 2.0 * grid.h) return 0.0;
    return interpolate_at(ap, x);
}

GeneratingFunction invert_initial_data(const std::function<double(double)>& g) {
    if (!g) throw std::invalid_argument("invert_initial_data: empty profile callable");

    // Scan the data out to the probe horizon: find its peak and make sure
    // it has genuinely decayed by the far end, otherwise the inward
    // integral (and the tail-coefficient integral) mean nothing.
    double peak = 0.0;
    for (double x = 0.0; x <= kProbeHorizon; x += 0.01) {
        double val = g(x);
        if (!std::isfinite(val))
            throw std::invalid_argument("invert_initial_data: data not finite at r=" + std::to_string(x));
        peak = std::max(peak, std::abs(val));
    }

    GeneratingFunction out;
    if (peak == 0.0) {
        out.grid = make_grid(kTableSpacing, 1.0);
        out.a = ScalarField(out.grid, Parity::odd);
        out.ap = ScalarField(out.grid, Parity::even);
        out.appp = ScalarField(out.grid, Parity::even);
        out.u_max = 0.5;
        return out;
    }
    double tail_sup = 0.0;
    for (double x = kProbeHorizon - 2.0; x <= kProbeHorizon; x += 0.01)
        tail_sup = std::max(tail_sup, std::abs(g(x)));
    if (tail_sup > 1e-13 * peak)
        throw std::invalid_argument("invert_initial_data: data has not decayed by r="
                                    + std::to_string(kProbeHorizon) + " (tail/peak = "
                                    + std::to_string(tail_sup / peak) + ")");

    // Effective support: past here the data is below 1e-13 of its peak.
    double r_sup = kProbeHorizon;
    for (double x = kProbeHorizon; x >= 0.0; x -= 0.01) {
        if (std::abs(g(x)) > 1e-13 * peak) { r_sup = x; break; }
    }
    double u_cap = std::min(kProbeHorizon, r_sup + 4.0);

    out.grid = make_grid(kTableSpacing, u_cap);
    out.a = ScalarField(out.grid, Parity::odd);
    out.ap = ScalarField(out.grid, Parity::even);
    const std::size_t n = out.grid.n;

    // G(u) = integral of g from u to infinity, accumulated inward so the
    // decay-at-infinity constant is built in; then
    //   a(u) = -(u/2) G(u),   a'(u) = -G(u)/2 + (u/2) g(u).
    double G = 0.0;
    for (double x = kProbeHorizon; x > u_cap + 1e-12; x -= 0.5)
        G += gauss3(g, std::max(u_cap, x - 0.5), x);
    std::vector<double> Gtab(n);
    Gtab[n - 1] = G;
    for (std::size_t i = n - 1; i > 0; --i)
        Gtab[i - 1] = Gtab[i] + gauss3(g, out.grid.r(i - 1), out.grid.r(i));
    for (std::size_t i = 0; i < n; ++i) {
        double u = out.grid.r(i);
        out.a.v[i] = -0.5 * u * Gtab[i];
        out.ap.v[i] = -0.5 * Gtab[i] + 0.5 * u * g(u);
    }
    out.a.v[0] = 0.0;

    out.appp = derivative(out.ap, 2);

    double pa = table_peak(out.a), pap = table_peak(out.ap);
    std::size_t last = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(out.a.v[i]) >= 1e-14 * pa || std::abs(out.ap.v[i]) >= 1e-14 * pap)
            last = i;
    out.u_max = std::max(1.0, out.grid.r(last));
    // beyond u_max the tables hold only rounding residue; zero it so the
    // compact support of the pulse is exact and the convolution's
    // truncation at |u| = u_max loses nothing at all
    for (std::size_t i = 0; i < n; ++i)
        if (out.grid.r(i) > out.u_max) {
            out.a.v[i] = 0.0;
            out.ap.v[i] = 0.0;
        }
    return out;
}

double free_wave_eval(const GeneratingFunction& a, double t, double r) {
    if (!std::isfinite(t) || !std::isfinite(r))
        throw std::invalid_argument("free_wave_eval: non-finite point");
    if (r < 0.0) return -free_wave_eval(a, t, -r);
    if (r < 0.01) {
        // l=1 regularity: F1 = (2/3) a'''(t) r + O(r^3)
        double x = std::abs(t);
        double am3 = (x >= a.grid.r_max() - 2.0 * a.grid.h) ? 0.0 : interpolate_at(a.appp, x);
        return (2.0 / 3.0) * am3 * r;
    }
    return (a.eval_ap(t - r) + a.eval_ap(t + r)) / r
         + (a.eval_a(t - r) - a.eval_a(t + r)) / (r * r);
}

double third_order_source(const GeneratingFunction& a, double u, double v) {
    if (v < u)
        throw std::invalid_argument("third_order_source: null coordinates need u <= v");
    double f = free_wave_eval(a, 0.5 * (u + v), 0.5 * (v - u));
    return f * f * f;
}

namespace {

/* Tensor Gauss-5 sweep of the light-cone integrand over panels of the
 * given widths; the caller halves the widths to estimate the error. */
double cone_sweep(const GeneratingFunction& a, double t, double r,
                  double v_lo, double v_hi, double wu, double wv) {
    static const Gauss5 G5;
    double acc = 0.0;
    long nv = std::max(1L, static_cast<long>(std::ceil((v_hi - v_lo) / wv)));
    double hv = (v_hi - v_lo) / static_cast<double>(nv);
    for (long j = 0; j < nv; ++j) {
        double vm = v_lo + (static_cast<double>(j) + 0.5) * hv;
        for (int jq = 0; jq < 5; ++jq) {
            double v = vm + 0.5 * hv * G5.x[jq];
            // integrand support in u: the free wave vanishes unless
            // |u| <= u_max or |v| <= u_max
            double u_lo = (v <= a.u_max) ? -v : -a.u_max;
            double u_hi = std::min(t - r, (v <= a.u_max) ? v : a.u_max);
            if (!(u_hi > u_lo)) continue;
            long nu = std::max(1L, static_cast<long>(std::ceil((u_hi - u_lo) / wu)));
            double hu = (u_hi - u_lo) / static_cast<double>(nu);
            double row = 0.0;
            for (long i = 0; i < nu; ++i) {
                double um = u_lo + (static_cast<double>(i) + 0.5) * hu;
                for (int iq = 0; iq < 5; ++iq) {
                    double u = um + 0.5 * hu * G5.x[iq];
                    double dv_u = v - u;
                    if (dv_u <= 0.0) continue;
                    double kern = ((v - t) * (t - u) + r * r) / (dv_u * dv_u);
                    double rp = 0.5 * dv_u;
                    double f = free_wave_eval(a, 0.5 * (u + v), rp);
                    row += G5.w[iq] * kern * f * f * f;
                }
            }
            acc += G5.w[jq] * 0.5 * hv * 0.5 * hu * row;
        }
    }
    return acc;
}

} // namespace

ConvolveResult green_convolve(const GeneratingFunction& a, double t, double r, double tol) {
    if (!(t > 0.0) || !(r > 0.0))
        throw std::invalid_argument("green_convolve: need t > 0 and r > 0");
    if (!(tol > 0.0))
        throw std::invalid_argument("green_convolve: tolerance must be positive");
    if (table_peak(a.ap) == 0.0) return {0.0, 0.0};

    double v_lo = std::abs(t - r), v_hi = t + r;
    if (t - r <= -a.u_max) return {0.0, 0.0};  // observer's whole cone misses the data

    double pref = 2.0 / (3.0 * r * r);
    double coarse = pref * cone_sweep(a, t, r, v_lo, v_hi, 0.5, 1.0);
    double fine = pref * cone_sweep(a, t, r, v_lo, v_hi, 0.25, 0.5);
    double err = std::abs(fine - coarse);
    if (err > tol)
        throw std::runtime_error("green_convolve: quadrature error " + std::to_string(err)
                                 + " exceeds tolerance " + std::to_string(tol));
    return {fine, err};
}

TailPrediction asymptotic_coefficient(const GeneratingFunction& a) {
    ScalarField cube(a.grid, Parity::even);
    for (std::size_t i = 0; i < cube.size(); ++i) {
        double x = a.ap.v[i];
        cube.v[i] = x * x * x;
    }
    TailPrediction out;
    // a' is even, so the whole-line integral is twice the half-line one
    out.c = -(64.0 / 9.0) * 2.0 * integral(cube, 0.0, a.grid.r_max());
    return out;
}

} // namespace skyrme
