/* Method-of-lines evolution.  See evolution.hpp for the scheme and the
 * causal-isolation policy that replaces an outer boundary condition.
 */
#include "skyrme/evolution.hpp"

#include "skyrme/operators.hpp"
#include "skyrme/rk4.hpp"
#include "skyrme/skyrmion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skyrme {

namespace {

// Pointwise assembly of the time derivatives from r, F, F', F'', P.
// Shared by the fused kernel and the operator-composed reference so the
// two can only differ through the stencil values they feed in.
inline void combine_point(double r, double F, double Fp, double Fpp, double P,
                          double& dF, double& dP) {
    double sF = std::sin(F), cF = std::cos(F);
    double s2 = sF * sF;
    double sin2F = 2.0 * sF * cF;
    double w = r * r + 2.0 * s2;
    double Ft = P / w;
    double wp = 2.0 * r + 2.0 * sin2F * Fp;
    // F(0) = 0, so sin F / r is regular everywhere we are called (r > 0).
    double sr = sF / r;
    dF = Ft;
    dP = wp * Fp + w * Fpp - sin2F * (1.0 + sr * sr + Fp * Fp - Ft * Ft);
}

void check_state_shape(const FieldState& s, const char* who) {
    const auto& g = s.F.grid;
    if (g.staggered || s.P.grid.staggered)
        throw std::invalid_argument(std::string(who) + ": vertex grid required (the origin must be a node)");
    if (g.n < 8)
        throw std::invalid_argument(std::string(who) + ": grid too small");
    if (s.P.grid.n != g.n || s.P.grid.h != g.h)
        throw std::invalid_argument(std::string(who) + ": F and P must share one grid");
    if (s.F.parity != Parity::odd || s.P.parity != Parity::odd)
        throw std::invalid_argument(std::string(who) + ": F and P must be odd across the origin");
    if (s.F.v[0] != 0.0 || s.P.v[0] != 0.0)
        throw std::invalid_argument(std::string(who) + ": regularity requires F(0) = P(0) = 0");
    if (!(s.support >= 0.0) || !std::isfinite(s.support))
        throw std::invalid_argument(std::string(who) + ": bad support radius");
}

void shape_output(const RadialGrid& g, ScalarField& f) {
    if (f.grid.n != g.n || f.grid.h != g.h || f.grid.staggered != g.staggered) {
        f.grid = g;
        f.v.assign(g.n, 0.0);
    }
    f.parity = Parity::odd;
}

void check_derivative_finite(const RadialGrid& g, const ScalarField& dF, const ScalarField& dP) {
    for (std::size_t i = 0; i < g.n; ++i)
        if (!std::isfinite(dF.v[i]) || !std::isfinite(dP.v[i]))
            throw std::runtime_error("nonlinear_rhs: non-finite derivative at index " +
                                     std::to_string(i) + " (r=" + std::to_string(g.r(i)) + ")");
}

} // namespace

// The outermost rows are held at their initial values instead of being
// evolved.  Causal isolation guarantees no physical signal reaches them,
// and letting them run would excite a slow instability of the one-sided
// closure rows, seeded by nothing more than their own truncation residual.
// Four rows keep every evolved node on a centered stencil whose reads stay
// inside evolved-or-frozen data.
constexpr std::size_t kFrozenEdge = 4;

void nonlinear_rhs(const FieldState& s, ScalarField& dF, ScalarField& dP) {
    check_state_shape(s, "nonlinear_rhs");
    const auto& g = s.F.grid;
    shape_output(g, dF);
    shape_output(g, dP);

    const double h = g.h;
    const double i12h = 1.0 / (12.0 * h);
    const double i12h2 = 1.0 / (12.0 * h * h);
    const long n = static_cast<long>(g.n);
    const long n_evolve = n - static_cast<long>(kFrozenEdge);
    const double* Fv = s.F.v.data();
    const double* Pv = s.P.v.data();
    double* dFv = dF.v.data();
    double* dPv = dP.v.data();

#pragma omp parallel for schedule(static)
    for (long i = 1; i < n_evolve; ++i) {
        // Centered 5-point rows; indices below the origin reflect with odd
        // parity, matching ScalarField::reflected on a vertex grid.  The
        // frozen edge keeps i + 2 in range.
        double fm2 = (i >= 2) ? Fv[i - 2] : -Fv[2 - i];
        double fm1 = Fv[i - 1];
        double fp1 = Fv[i + 1];
        double fp2 = Fv[i + 2];
        double fp = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) * i12h;
        double fpp = (-fm2 + 16.0 * fm1 - 30.0 * Fv[i] + 16.0 * fp1 - fp2) * i12h2;
        combine_point(g.r(static_cast<std::size_t>(i)), Fv[i], fp, fpp, Pv[i], dFv[i], dPv[i]);
    }
    dFv[0] = 0.0;
    dPv[0] = 0.0;
    for (long i = n_evolve; i < n; ++i) {
        dFv[i] = 0.0;
        dPv[i] = 0.0;
    }
    check_derivative_finite(g, dF, dP);
}

void nonlinear_rhs_reference(const FieldState& s, ScalarField& dF, ScalarField& dP) {
    check_state_shape(s, "nonlinear_rhs");
    const auto& g = s.F.grid;
    shape_output(g, dF);
    shape_output(g, dP);
    ScalarField Fp = derivative(s.F, 1);
    ScalarField Fpp = derivative(s.F, 2);
    const std::size_t n_evolve = g.n - kFrozenEdge;
    for (std::size_t i = 1; i < n_evolve; ++i)
        combine_point(g.r(i), s.F.v[i], Fp.v[i], Fpp.v[i], s.P.v[i], dF.v[i], dP.v[i]);
    dF.v[0] = 0.0;
    dP.v[0] = 0.0;
    for (std::size_t i = n_evolve; i < g.n; ++i) {
        dF.v[i] = 0.0;
        dP.v[i] = 0.0;
    }
    check_derivative_finite(g, dF, dP);
}

EnergyBreakdown energy(const FieldState& s) {
    check_state_shape(s, "energy");
    const auto& g = s.F.grid;
    ScalarField Fp = derivative(s.F, 1);
    ScalarField e2(g, Parity::even), e4(g, Parity::even);
    for (std::size_t i = 1; i < g.n; ++i) {
        double r = g.r(i);
        double sF = std::sin(s.F.v[i]);
        double s2 = sF * sF;
        double w = r * r + 2.0 * s2;
        double Ft = s.P.v[i] / w;
        double grad = Ft * Ft + Fp.v[i] * Fp.v[i];
        e2.v[i] = 0.5 * (r * r * grad + 2.0 * s2);
        e4.v[i] = 0.5 * (2.0 * s2 * grad + s2 * s2 / (r * r));
    }
    // Both densities vanish at the origin: F(0) = 0 and sin^4 F / r^2 = O(r^2).
    e2.v[0] = 0.0;
    e4.v[0] = 0.0;
    EnergyBreakdown out;
    out.sigma = integral(e2, 0.0, g.r_max());
    out.skyrme = integral(e4, 0.0, g.r_max());
    out.total = out.sigma + out.skyrme;
    return out;
}

FieldState make_initial_data(DataFamily family, const DataParams& par, const RadialGrid& g) {
    if (g.staggered)
        throw std::invalid_argument("make_initial_data: vertex grid required");
    if (!std::isfinite(par.A) || !std::isfinite(par.rho))
        throw std::invalid_argument("make_initial_data: non-finite parameters");

    FieldState s;
    s.t = 0.0;
    s.F = ScalarField(g, Parity::odd);
    s.P = ScalarField(g, Parity::odd);

    if (family == DataFamily::degree0_gaussian_cubed) {
        for (std::size_t i = 0; i < g.n; ++i) {
            double r = g.r(i);
            s.F.v[i] = par.A * r * r * r * std::exp(-r * r);
        }
        s.support = (par.A == 0.0) ? 0.0 : 8.0;
    } else {
        if (!(par.b > 0.0))
            throw std::invalid_argument("make_initial_data: degree-1 family needs the static origin slope b");
        if (!(par.rho > 0.0))
            throw std::invalid_argument("make_initial_data: bump center must be positive");
        ScalarField Sp_unused(g, Parity::even);
        sample_skyrmion(par.b, g, s.F, Sp_unused);
        // Cubic factor normalized at the bump center so A is roughly the
        // peak amplitude in radians; an unnormalized r^3 bump at rho = 3
        // would be tens of radians and simply collapse.
        for (std::size_t i = 0; i < g.n; ++i) {
            double r = g.r(i);
            double x = r / par.rho;
            double d = r - par.rho;
            s.F.v[i] += par.A * x * x * x * std::exp(-d * d);
        }
        // The bump is gone within ~8 of its center; A = 0 still reports the
        // static core as the source of discretization noise.
        s.support = par.rho + 8.0;
    }
    s.F.v[0] = 0.0;
    require_finite(s.F.v, "make_initial_data F");
    return s;
}

FieldState make_custom_data(ScalarField F, ScalarField P, double support) {
    FieldState s;
    s.t = 0.0;
    s.F = std::move(F);
    s.P = std::move(P);
    s.support = support;
    check_state_shape(s, "make_custom_data");
    require_finite(s.F.v, "make_custom_data F");
    require_finite(s.P.v, "make_custom_data P");
    if (!(support <= s.F.grid.r_max()))
        throw std::invalid_argument("make_custom_data: support radius beyond the grid");
    double end = s.F.v.back();
    double pi = 4.0 * std::atan(1.0);
    if (std::min(std::fabs(end), std::fabs(end - pi)) > 0.15)
        throw std::invalid_argument("make_custom_data: field does not reach a clean vacuum value (0 or pi) at the outer edge");
    return s;
}

namespace {

double eval_observer(const ScalarField& F, const ScalarField& P, const ObserverSpec& o) {
    switch (o.what) {
    case Quantity::F: return interpolate_at(F, o.radius);
    case Quantity::P: return interpolate_at(P, o.radius);
    case Quantity::F_minus_reference: return interpolate_at(F, o.radius) - o.reference;
    }
    throw std::logic_error("eval_observer: unknown quantity");
}

std::string default_label(const ObserverSpec& o) {
    const char* q = (o.what == Quantity::F) ? "F" : (o.what == Quantity::P) ? "P" : "F-ref";
    return std::string(q) + "@" + std::to_string(o.radius);
}

} // namespace

EvolveResult evolve(const FieldState& initial, double t_max, double dt,
                    const std::vector<ObserverSpec>& observers) {
    check_state_shape(initial, "evolve");
    require_finite(initial.F.v, "evolve F");
    require_finite(initial.P.v, "evolve P");
    const auto& g = initial.F.grid;
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("evolve: dt must be positive");
    if (dt > 0.5 * g.h * (1.0 + 1e-12))
        throw std::invalid_argument("evolve: dt=" + std::to_string(dt) +
                                    " violates the CFL bound 0.5 h=" + std::to_string(0.5 * g.h));
    if (!(t_max >= initial.t))
        throw std::invalid_argument("evolve: t_max is before the state's current time");

    double max_obs = 0.0;
    for (const auto& o : observers) {
        if (!(o.radius > 0.0) || o.radius > g.r_max())
            throw std::invalid_argument("evolve: observer radius outside the grid");
        if (o.cadence < dt)
            throw std::invalid_argument("evolve: observer cadence below the time step");
        max_obs = std::max(max_obs, o.radius);
    }
    double needed = t_max + max_obs + initial.support;
    double wall = g.r_max() - static_cast<double>(kFrozenEdge) * g.h;
    if (wall + 1e-9 < needed)
        throw std::invalid_argument(
            "evolve: grid too short for causal isolation: r_max minus the frozen band = " +
            std::to_string(wall) + " < t_max + observer radius + support = " + std::to_string(needed));

    const std::size_t n = g.n;
    EvolveResult res;
    res.state = initial;
    res.energy_sigma.label = "E_sigma";
    res.energy_skyrme.label = "E_skyrme";
    res.energy_total.label = "E_total";

    // Stacked state vector [F; P] driven by the fused kernel.
    std::vector<double> y(2 * n);
    std::copy(initial.F.v.begin(), initial.F.v.end(), y.begin());
    std::copy(initial.P.v.begin(), initial.P.v.end(), y.begin() + static_cast<std::ptrdiff_t>(n));

    FieldState work = initial;
    ScalarField dFs(g, Parity::odd), dPs(g, Parity::odd);
    auto load_work = [&](const std::vector<double>& yy) {
        std::copy(yy.begin(), yy.begin() + static_cast<std::ptrdiff_t>(n), work.F.v.begin());
        std::copy(yy.begin() + static_cast<std::ptrdiff_t>(n), yy.end(), work.P.v.begin());
    };
    auto rhs = [&](double, const std::vector<double>& yy, std::vector<double>& dy) {
        load_work(yy);
        nonlinear_rhs(work, dFs, dPs);
        std::copy(dFs.v.begin(), dFs.v.end(), dy.begin());
        std::copy(dPs.v.begin(), dPs.v.end(), dy.begin() + static_cast<std::ptrdiff_t>(n));
    };

    struct Probe {
        ObserverSpec spec;
        double next = 0.0;
        double prev = 0.0;
    };
    std::vector<Probe> probes;
    probes.reserve(observers.size());
    double e_cadence = 0.1;
    for (const auto& o : observers) {
        probes.push_back({o, 0.0, 0.0});
        e_cadence = std::min(e_cadence, o.cadence);
    }

    double t = initial.t;
    res.observers.resize(observers.size());
    load_work(y);
    for (std::size_t j = 0; j < probes.size(); ++j) {
        auto& pr = probes[j];
        res.observers[j].label = pr.spec.label.empty() ? default_label(pr.spec) : pr.spec.label;
        pr.prev = eval_observer(work.F, work.P, pr.spec);
        res.observers[j].push(t, pr.prev);
        pr.next = t + pr.spec.cadence;
    }
    auto record_energy = [&](double tt) {
        EnergyBreakdown e = energy(work);
        res.energy_sigma.push(tt, e.sigma);
        res.energy_skyrme.push(tt, e.skyrme);
        res.energy_total.push(tt, e.total);
    };
    record_energy(t);
    double next_energy = t + e_cadence;

    // Index the time grid instead of accumulating t, so a run continued
    // from a returned state repeats the exact step sequence of one long run.
    long n_steps = static_cast<long>(std::ceil((t_max - initial.t) / dt - 1e-9));
    Rk4Scratch scratch;
    for (long k = 0; k < n_steps; ++k) {
        t = initial.t + static_cast<double>(k) * dt;
        double t_new = (k == n_steps - 1) ? t_max : initial.t + static_cast<double>(k + 1) * dt;
        double step = t_new - t;
        rk4_step_inplace(rhs, t, step, y, scratch);
        for (double v : y)
            if (!std::isfinite(v))
                throw std::runtime_error("evolve: non-finite state at t=" + std::to_string(t_new));

        load_work(y);
        for (std::size_t j = 0; j < probes.size(); ++j) {
            auto& pr = probes[j];
            double cur = eval_observer(work.F, work.P, pr.spec);
            while (pr.next <= t_new + 1e-12) {
                double th = std::clamp((pr.next - t) / step, 0.0, 1.0);
                res.observers[j].push(pr.next, pr.prev + th * (cur - pr.prev));
                pr.next += pr.spec.cadence;
            }
            pr.prev = cur;
        }
        if (next_energy <= t_new + 1e-12) {
            work.t = t_new;
            record_energy(t_new);
            while (next_energy <= t_new + 1e-12) next_energy += e_cadence;
        }
        t = t_new;
    }

    if (res.energy_total.t.back() < t_max - 1e-12) {
        load_work(y);
        record_energy(t_max);
    }
    res.state.t = t_max;
    std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), res.state.F.v.begin());
    std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), res.state.P.v.begin());
    return res;
}

TimeSeries evolve_linear(const ScalarField& v0, const ScalarField& vdot0,
                         const PotentialTable* pot, double t_max, double dt,
                         const ObserverSpec& obs) {
    const auto& g = v0.grid;
    if (g.staggered)
        throw std::invalid_argument("evolve_linear: vertex grid required");
    if (g.n < 8 || vdot0.grid.n != g.n || vdot0.grid.h != g.h || vdot0.grid.staggered)
        throw std::invalid_argument("evolve_linear: v and dv/dt must share one vertex grid");
    if (v0.parity != Parity::even || vdot0.parity != Parity::even)
        throw std::invalid_argument("evolve_linear: v is even across the origin (regular solutions start at r^2)");
    if (v0.v[0] != 0.0 || vdot0.v[0] != 0.0)
        throw std::invalid_argument("evolve_linear: regularity requires v(0) = 0");
    require_finite(v0.v, "evolve_linear v");
    require_finite(vdot0.v, "evolve_linear dv/dt");
    if (!(dt > 0.0) || dt > 0.5 * g.h * (1.0 + 1e-12))
        throw std::invalid_argument("evolve_linear: dt violates the CFL bound 0.5 h");
    if (!(t_max > 0.0))
        throw std::invalid_argument("evolve_linear: t_max must be positive");
    if (!(obs.radius > 0.0) || obs.radius > g.r_max())
        throw std::invalid_argument("evolve_linear: observer radius outside the grid");
    if (obs.cadence < dt)
        throw std::invalid_argument("evolve_linear: observer cadence below the time step");

    // Dynamic support: outermost node carrying a meaningful amplitude.
    double amp = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        amp = std::max(amp, std::max(std::fabs(v0.v[i]), std::fabs(vdot0.v[i])));
    double support = 0.0;
    if (amp > 0.0) {
        for (std::size_t i = g.n; i-- > 0;) {
            if (std::fabs(v0.v[i]) > 1e-14 * amp || std::fabs(vdot0.v[i]) > 1e-14 * amp) {
                support = g.r(i);
                break;
            }
        }
    }
    double needed = t_max + obs.radius + support;
    double wall = g.r_max() - static_cast<double>(kFrozenEdge) * g.h;
    if (wall + 1e-9 < needed)
        throw std::invalid_argument(
            "evolve_linear: grid too short for causal isolation: r_max minus the frozen band = " +
            std::to_string(wall) + " < t_max + observer radius + support = " + std::to_string(needed));

    // Tabulate the potential once; beyond its switch radius the analytic
    // tail keeps it valid on the whole evolution grid.
    const std::size_t n = g.n;
    std::vector<double> V(n, 0.0);
    if (pot)
        for (std::size_t i = 0; i < n; ++i) V[i] = pot->value(g.r(i));

    std::vector<double> y(2 * n);
    std::copy(v0.v.begin(), v0.v.end(), y.begin());
    std::copy(vdot0.v.begin(), vdot0.v.end(), y.begin() + static_cast<std::ptrdiff_t>(n));

    ScalarField vf(g, Parity::even), vpp(g, Parity::even);
    const std::size_t n_evolve = n - kFrozenEdge;
    auto rhs = [&](double, const std::vector<double>& yy, std::vector<double>& dy) {
        std::copy(yy.begin(), yy.begin() + static_cast<std::ptrdiff_t>(n), vf.v.begin());
        vpp = derivative(vf, 2);
        // d2v/dt2 = v'' - 2 v / r^2 - V v; the origin value is pinned by
        // regularity (v'' and 2v/r^2 cancel there for the r^2 branch), and
        // the outer rows are frozen exactly as in the nonlinear sweep.
        dy[0] = 0.0;
        dy[n] = 0.0;
        for (std::size_t i = 1; i < n_evolve; ++i) {
            double r = g.r(i);
            dy[i] = yy[n + i];
            dy[n + i] = vpp.v[i] - 2.0 * yy[i] / (r * r) - V[i] * yy[i];
        }
        for (std::size_t i = n_evolve; i < n; ++i) {
            dy[i] = 0.0;
            dy[n + i] = 0.0;
        }
    };

    TimeSeries out;
    out.label = obs.label.empty() ? ("v@" + std::to_string(obs.radius)) : obs.label;
    double t = 0.0;
    double prev = interpolate_at(v0, obs.radius);
    out.push(t, prev);
    double next = obs.cadence;

    long n_steps = static_cast<long>(std::ceil(t_max / dt - 1e-9));
    Rk4Scratch scratch;
    for (long k = 0; k < n_steps; ++k) {
        t = static_cast<double>(k) * dt;
        double t_new = (k == n_steps - 1) ? t_max : static_cast<double>(k + 1) * dt;
        double step = t_new - t;
        rk4_step_inplace(rhs, t, step, y, scratch);
        for (double vv : y)
            if (!std::isfinite(vv))
                throw std::runtime_error("evolve_linear: non-finite state at t=" + std::to_string(t_new));
        std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), vf.v.begin());
        double cur = interpolate_at(vf, obs.radius);
        while (next <= t_new + 1e-12) {
            double th = std::clamp((next - t) / step, 0.0, 1.0);
            out.push(next, prev + th * (cur - prev));
            next += obs.cadence;
        }
        prev = cur;
    }
    return out;
}

} // namespace skyrme
