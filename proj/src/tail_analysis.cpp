/* Ringdown and power-law fitters for observer time series. */
#include "skyrme/tail_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace skyrme {

namespace {

struct Samples {
    std::vector<double> t, y;
};

Samples window_samples(const TimeSeries& s, double t1, double t2) {
    if (!(t1 < t2))
        throw std::invalid_argument("fit window: need t1 < t2");
    if (s.t.size() != s.value.size())
        throw std::invalid_argument("fit window: ragged time series");
    Samples w;
    const double eps = 1e-9 * (std::abs(t1) + std::abs(t2) + 1.0);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        double t = s.t[k];
        if (t < t1 - eps || t > t2 + eps) continue;
        if (!std::isfinite(t) || !std::isfinite(s.value[k]))
            throw std::invalid_argument("fit window: non-finite sample at t=" + std::to_string(t));
        w.t.push_back(t);
        w.y.push_back(s.value[k]);
    }
    return w;
}

/* Dense solve by Gaussian elimination with partial pivoting; the systems
 * here are 2x2 to 4x4 normal equations, nothing fancy needed. */
void solve_dense(std::vector<double>& M, std::vector<double>& rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(M[r * n + col]) > std::abs(M[piv * n + col])) piv = r;
        if (M[piv * n + col] == 0.0)
            throw std::runtime_error("fit: singular normal equations");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(M[piv * n + c], M[col * n + c]);
            std::swap(rhs[piv], rhs[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = M[r * n + col] / M[col * n + col];
            for (int c = col; c < n; ++c) M[r * n + c] -= f * M[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = rhs[r];
        for (int c = r + 1; c < n; ++c) acc -= M[r * n + c] * rhs[c];
        rhs[r] = acc / M[r * n + r];
    }
}

double floor_guard_level(const TimeSeries& s) {
    double peak = 0.0;
    for (double v : s.value) peak = std::max(peak, std::abs(v));
    return 1e3 * (peak * 1e-13);
}

} // namespace

RingdownFit fit_ringdown(const TimeSeries& series, double t1, double t2) {
    Samples w = window_samples(series, t1, t2);
    const std::size_t n = w.t.size();
    if (n < 8)
        throw std::invalid_argument("fit_ringdown: fewer than 8 samples in window");

    // Zero crossings give the period; fewer than two means no oscillation
    // to fit.
    std::vector<double> crossings;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double a = w.y[k], b = w.y[k + 1];
        if (a == 0.0) { crossings.push_back(w.t[k]); continue; }
        if (a * b < 0.0)
            crossings.push_back(w.t[k] + (w.t[k + 1] - w.t[k]) * a / (a - b));
    }
    if (crossings.size() < 2)
        throw std::invalid_argument("fit_ringdown: fewer than two sign changes in window, nothing oscillates");
    double omega0 = M_PI * static_cast<double>(crossings.size() - 1)
                    / (crossings.back() - crossings.front());

    // Decay rate from the peak envelope, least squares of ln|peak| vs t.
    double gamma0 = 0.0;
    {
        std::vector<double> pt, pz;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            double a = std::abs(w.y[k]);
            if (a > std::abs(w.y[k - 1]) && a >= std::abs(w.y[k + 1]) && a > 0.0) {
                pt.push_back(w.t[k]);
                pz.push_back(std::log(a));
            }
        }
        if (pt.size() >= 2) {
            double st = 0, sz = 0, stt = 0, stz = 0;
            for (std::size_t k = 0; k < pt.size(); ++k) {
                st += pt[k]; sz += pz[k]; stt += pt[k] * pt[k]; stz += pt[k] * pz[k];
            }
            double m = static_cast<double>(pt.size());
            double denom = m * stt - st * st;
            if (denom != 0.0) gamma0 = -(m * stz - st * sz) / denom;
        }
    }

    // Amplitude and phase by linear least squares at frozen (gamma0, omega0).
    double A = 1.0, delta = 0.0;
    {
        double sbb = 0, sbc = 0, scc = 0, sby = 0, scy = 0;
        for (std::size_t k = 0; k < n; ++k) {
            double e = std::exp(-gamma0 * w.t[k]);
            double bs = e * std::sin(omega0 * w.t[k]);
            double bc = e * std::cos(omega0 * w.t[k]);
            sbb += bs * bs; sbc += bs * bc; scc += bc * bc;
            sby += bs * w.y[k]; scy += bc * w.y[k];
        }
        std::vector<double> M = {sbb, sbc, sbc, scc}, r = {sby, scy};
        solve_dense(M, r, 2);
        A = std::hypot(r[0], r[1]);
        delta = std::atan2(r[1], r[0]);
        if (A == 0.0) A = 1.0;
    }

    // Weight each sample by the inverse of the decaying envelope, capped
    // to stay in range.  This is the oscillatory counterpart of fitting
    // in ln space: every cycle of the ringdown counts the same instead of
    // the first one swamping the rest, and multiplicative noise becomes
    // uniform.  Weights are frozen at the envelope estimate, so exact
    // model data is still recovered exactly (zero residual is zero under
    // any weighting).
    std::vector<double> wt(n);
    for (std::size_t k = 0; k < n; ++k)
        wt[k] = std::exp(std::min(std::max(gamma0, 0.0) * (w.t[k] - w.t.front()), 600.0));

    double gamma = gamma0, omega = omega0;
    auto ssr_of = [&](double Ap, double Gp, double Op, double Dp) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double r = wt[k] * (w.y[k] - Ap * std::exp(-Gp * w.t[k]) * std::sin(Op * w.t[k] + Dp));
            acc += r * r;
        }
        return acc;
    };
    double ssr = ssr_of(A, gamma, omega, delta);

    int iter = 0;
    for (; iter < 200; ++iter) {
        std::vector<double> M(16, 0.0), rhs(4, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double t = w.t[k];
            double e = std::exp(-gamma * t);
            double s = std::sin(omega * t + delta), c = std::cos(omega * t + delta);
            double m = A * e * s;
            double resid = wt[k] * (w.y[k] - m);
            double J[4] = {wt[k] * e * s, -wt[k] * t * m, wt[k] * A * e * t * c, wt[k] * A * e * c};
            for (int a = 0; a < 4; ++a) {
                rhs[a] += J[a] * resid;
                for (int b = 0; b < 4; ++b) M[a * 4 + b] += J[a] * J[b];
            }
        }
        solve_dense(M, rhs, 4);

        // Step halving keeps Gauss-Newton from overshooting when the
        // starting point is rough.
        double scale = 1.0;
        double nA = A, nG = gamma, nO = omega, nD = delta, nssr = ssr;
        bool improved = false;
        for (int h = 0; h < 30; ++h) {
            double cA = A + scale * rhs[0];
            double cG = gamma + scale * rhs[1];
            double cO = omega + scale * rhs[2];
            double cD = delta + scale * rhs[3];
            double cs = ssr_of(cA, cG, cO, cD);
            if (cs <= ssr) { nA = cA; nG = cG; nO = cO; nD = cD; nssr = cs; improved = true; break; }
            scale *= 0.5;
        }
        if (!improved) break;
        double move = std::abs(nA - A) + std::abs(nG - gamma) + std::abs(nO - omega) + std::abs(nD - delta);
        A = nA; gamma = nG; omega = nO; delta = nD; ssr = nssr;
        if (move < 1e-14 * (std::abs(A) + std::abs(gamma) + std::abs(omega) + 1.0)) { ++iter; break; }
    }

    if (A < 0.0) { A = -A; delta += M_PI; }
    delta = std::remainder(delta, 2.0 * M_PI);
    if (!(gamma > 0.0))
        throw std::runtime_error("fit_ringdown: fitted rate is not a decay (Gamma=" + std::to_string(gamma) + ")");
    if (!(omega > 0.0)) {
        omega = -omega;  // sin(-x) = -sin(x): fold the sign into the phase
        delta = std::remainder(M_PI - delta, 2.0 * M_PI);
    }

    RingdownFit out;
    out.amplitude = A;
    out.Gamma = gamma;
    out.Omega = omega;
    out.phase = delta;
    out.t1 = t1; out.t2 = t2;
    double raw_ssr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double r = w.y[k] - A * std::exp(-gamma * w.t[k]) * std::sin(omega * w.t[k] + delta);
        raw_ssr += r * r;
    }
    out.residual = std::sqrt(raw_ssr / static_cast<double>(n));
    out.iterations = iter;
    return out;
}

PowerLawFit fit_power_law(const TimeSeries& series, double t1, double t2,
                          double floor_level) {
    if (!(t1 > 0.0))
        throw std::invalid_argument("fit_power_law: window must start at t > 0");
    if (std::isnan(floor_level) || floor_level == std::numeric_limits<double>::infinity())
        throw std::invalid_argument("fit_power_law: floor level must be finite (negative selects the default)");
    Samples w = window_samples(series, t1, t2);

    // Drop samples down at the rounding floor of the run; they carry no
    // decay information, only accumulated cancellation noise.
    const double floor = (floor_level >= 0.0) ? floor_level : floor_guard_level(series);
    std::vector<double> t, y;
    for (std::size_t k = 0; k < w.t.size(); ++k) {
        if (std::abs(w.y[k]) <= floor) continue;
        t.push_back(w.t[k]);
        y.push_back(w.y[k]);
    }
    const std::size_t n = t.size();
    if (n < 8)
        throw std::invalid_argument("fit_power_law: fewer than 8 usable samples above the rounding floor");
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (y[k] * y[k + 1] <= 0.0)
            throw std::invalid_argument("fit_power_law: sign change inside window at t=" + std::to_string(t[k + 1]));
    if (!(t.back() >= 3.0 * t.front()))
        throw std::invalid_argument("fit_power_law: window spans less than a factor 3 in t");

    // ln|y| = a - b ln t + c / t, ordinary least squares.
    std::vector<double> M(9, 0.0), rhs(3, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double phi[3] = {1.0, -std::log(t[k]), 1.0 / t[k]};
        double z = std::log(std::abs(y[k]));
        for (int a = 0; a < 3; ++a) {
            rhs[a] += phi[a] * z;
            for (int b = 0; b < 3; ++b) M[a * 3 + b] += phi[a] * phi[b];
        }
    }
    solve_dense(M, rhs, 3);

    PowerLawFit out;
    out.offset = rhs[0];
    out.exponent = rhs[1];
    out.correction = rhs[2];
    out.t1 = t1; out.t2 = t2;
    out.samples = static_cast<int>(n);
    double ssr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double pred = out.offset - out.exponent * std::log(t[k]) + out.correction / t[k];
        double r = std::log(std::abs(y[k])) - pred;
        ssr += r * r;
    }
    out.residual = std::sqrt(ssr / static_cast<double>(n));
    if (!(out.exponent > 0.0))
        throw std::runtime_error("fit_power_law: fitted exponent is not a decay (b=" + std::to_string(out.exponent) + ")");
    return out;
}

TailCoefficient estimate_tail_coefficient(const TimeSeries& series, double t1, double t2,
                                          double r0, double exponent) {
    if (!(r0 > 0.0))
        throw std::invalid_argument("estimate_tail_coefficient: r0 must be positive");
    Samples w = window_samples(series, t1, t2);
    const std::size_t n = w.t.size();
    if (n < 5)
        throw std::invalid_argument("estimate_tail_coefficient: fewer than 5 samples in window");
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (std::abs(w.y[k + 1]) > std::abs(w.y[k]) * (1.0 + 1e-9))
            throw std::invalid_argument("estimate_tail_coefficient: |value| not monotone in window at t="
                                        + std::to_string(w.t[k + 1]) + "; not a settled tail");

    std::vector<double> q(n);
    for (std::size_t k = 0; k < n; ++k)
        q[k] = w.y[k] * std::pow(w.t[k], exponent) / r0;
    std::sort(q.begin(), q.end());
    auto quantile = [&](double p) {
        double x = p * static_cast<double>(n - 1);
        std::size_t lo = static_cast<std::size_t>(x);
        std::size_t hi = std::min(lo + 1, n - 1);
        double frac = x - static_cast<double>(lo);
        return q[lo] + frac * (q[hi] - q[lo]);
    };

    TailCoefficient out;
    out.value = quantile(0.5);
    out.lo = quantile(0.25);
    out.hi = quantile(0.75);
    out.t1 = t1; out.t2 = t2;
    out.samples = static_cast<int>(n);
    return out;
}

double suggest_tail_window_start(const TimeSeries& series, int min_run) {
    const std::size_t n = series.t.size();
    if (min_run < 2)
        throw std::invalid_argument("suggest_tail_window_start: min_run must be at least 2");
    if (n < static_cast<std::size_t>(min_run) + 1)
        throw std::invalid_argument("suggest_tail_window_start: series shorter than the requested run");
    std::size_t run_start = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        bool down = std::abs(series.value[k + 1]) <= std::abs(series.value[k]) * (1.0 + 1e-9);
        if (!down) {
            run_start = k + 1;
            continue;
        }
        if (k + 1 - run_start >= static_cast<std::size_t>(min_run))
            return series.t[run_start];
    }
    throw std::runtime_error("suggest_tail_window_start: no monotone stretch of the requested length; still ringing?");
}

} // namespace skyrme
