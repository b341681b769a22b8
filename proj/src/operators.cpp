#include "skyrme/operators.hpp"

#include "skyrme/fd_weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace skyrme {

namespace {

// Logical node radius, valid for negative (ghost) indices as well.
double node_r(const RadialGrid& g, long j) {
    return g.staggered ? (static_cast<double>(j) + 0.5) * g.h : static_cast<double>(j) * g.h;
}

// Field value at a logical index, reflecting through the origin if j < 0.
double node_v(const ScalarField& f, long j) {
    return j >= 0 ? f.v[static_cast<std::size_t>(j)] : f.reflected(j);
}

} // namespace

ScalarField derivative(const ScalarField& f, int m) {
    if (m != 1 && m != 2) throw std::invalid_argument("derivative: order must be 1 or 2");
    const auto& g = f.grid;
    if (g.n < 8) throw std::invalid_argument("derivative: grid too small");
    require_finite(f.v, "derivative input");

    ScalarField out(g, (m == 1) ? (f.parity == Parity::odd ? Parity::even : Parity::odd) : f.parity);
    const double h = g.h;
    const std::size_t n = g.n;
    const double i12h = 1.0 / (12.0 * h);
    const double i12h2 = 1.0 / (12.0 * h * h);

    // Interior and origin side: centered 5-point stencils.  Ghost values
    // below the origin come from the parity reflection, so i = 0, 1 keep
    // full order.
    long last_centered = static_cast<long>(n) - 3;
    for (long i = 0; i <= last_centered; ++i) {
        double fm2 = node_v(f, i - 2), fm1 = node_v(f, i - 1);
        double fp1 = node_v(f, i + 1), fp2 = node_v(f, i + 2);
        if (m == 1) {
            out.v[i] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) * i12h;
        } else {
            out.v[i] = (-fm2 + 16.0 * fm1 - 30.0 * f.v[i] + 16.0 * fp1 - fp2) * i12h2;
        }
    }

    // At a vertex origin the reflection makes the result vanish identically
    // when the parities line up; pin it so summation order cannot leave a
    // few-ulp residue there.
    if (!g.staggered) {
        bool vanishes = (m == 1) ? (f.parity == Parity::even) : (f.parity == Parity::odd);
        if (vanishes) out.v[0] = 0.0;
    }

    // Outer closure: one-sided stencils of matching order (5 nodes for the
    // first derivative, 6 for the second).
    const int width = (m == 1) ? 5 : 6;
    for (std::size_t i = n - 2; i < n; ++i) {
        std::size_t j0 = n - static_cast<std::size_t>(width);
        std::vector<double> xs(width);
        for (int k = 0; k < width; ++k) xs[k] = node_r(g, static_cast<long>(j0) + k);
        auto w = fd_weights(g.r(i), xs, m);
        double acc = 0.0;
        for (int k = 0; k < width; ++k) acc += w[k] * f.v[j0 + k];
        out.v[i] = acc;
    }
    return out;
}

double interpolate_at(const ScalarField& f, double r) {
    const auto& g = f.grid;
    const double lo = 0.0, hi = g.r_max();
    if (!std::isfinite(r) || r < lo - 1e-12 || r > hi + 1e-12 * std::max(1.0, hi))
        throw std::invalid_argument("interpolate_at: radius outside grid");
    r = std::clamp(r, lo, hi);

    // Five consecutive logical nodes centered on the nearest one; negative
    // indices are parity ghosts, and the stencil shifts inward at the top.
    long near = g.staggered ? static_cast<long>(std::floor(r / g.h)) : static_cast<long>(std::llround(r / g.h));
    long js = near - 2;
    long js_max = static_cast<long>(g.n) - 5;
    if (js > js_max) js = js_max;
    // Ghost depth is at most 2, which reflected() supports on any grid of
    // 8+ points.
    if (js < -2) js = -2;

    std::vector<double> xs(5);
    std::array<double, 5> vals{};
    for (int k = 0; k < 5; ++k) {
        xs[k] = node_r(g, js + k);
        vals[k] = node_v(f, js + k);
    }
    auto w = fd_weights(r, xs, 0);
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += w[k] * vals[k];
    return acc;
}

namespace {

// 3-point Gauss-Legendre on [a, b] applied to interpolated field values.
double gauss3_panel(const ScalarField& f, double a, double b) {
    static const double x1 = 0.7745966692414834; // sqrt(3/5)
    static const double w0 = 8.0 / 9.0, w1 = 5.0 / 9.0;
    double c = 0.5 * (a + b), s = 0.5 * (b - a);
    return s * (w0 * interpolate_at(f, c) + w1 * interpolate_at(f, c - s * x1) + w1 * interpolate_at(f, c + s * x1));
}

// Composite Simpson over consecutive nodes [i0, i1], with a 3/8 patch when
// the interval count is odd.
double simpson_nodes(const ScalarField& f, std::size_t i0, std::size_t i1) {
    const double h = f.grid.h;
    std::size_t m = i1 - i0;
    double acc = 0.0;
    if (m == 0) return 0.0;
    if (m % 2 == 1) {
        if (m >= 3) {
            // 3/8 rule on the last three intervals.
            std::size_t a = i1 - 3;
            acc += 3.0 * h / 8.0 * (f.v[a] + 3.0 * f.v[a + 1] + 3.0 * f.v[a + 2] + f.v[a + 3]);
            i1 = a;
            m -= 3;
        } else {
            // Single interval: Gauss panel keeps the order.
            return gauss3_panel(f, f.grid.r(i0), f.grid.r(i1));
        }
    }
    for (std::size_t i = i0; i < i1; i += 2)
        acc += h / 3.0 * (f.v[i] + 4.0 * f.v[i + 1] + f.v[i + 2]);
    return acc;
}

} // namespace

double integral(const ScalarField& f, double r_lo, double r_hi) {
    const auto& g = f.grid;
    if (!std::isfinite(r_lo) || !std::isfinite(r_hi))
        throw std::invalid_argument("integral: non-finite bounds");
    if (r_hi < r_lo) throw std::invalid_argument("integral: inverted range");
    if (r_lo < -1e-12 || r_hi > g.r_max() * (1.0 + 1e-12) + 1e-12)
        throw std::invalid_argument("integral: range outside grid");
    require_finite(f.v, "integral input");
    if (r_hi == r_lo) return 0.0;
    r_lo = std::max(r_lo, 0.0);
    r_hi = std::min(r_hi, g.r_max());

    // Node range fully inside [r_lo, r_hi].
    double eps = 1e-12 * g.h;
    long i0 = static_cast<long>(std::ceil((r_lo - (g.staggered ? 0.5 * g.h : 0.0)) / g.h - eps));
    long i1 = static_cast<long>(std::floor((r_hi - (g.staggered ? 0.5 * g.h : 0.0)) / g.h + eps));
    i0 = std::max<long>(i0, 0);
    i1 = std::min<long>(i1, static_cast<long>(g.n) - 1);

    if (i1 - i0 < 4) {
        // Too few nodes for a composite rule: Gauss panels on the raw range.
        double mid = 0.5 * (r_lo + r_hi);
        return gauss3_panel(f, r_lo, mid) + gauss3_panel(f, mid, r_hi);
    }

    double acc = simpson_nodes(f, static_cast<std::size_t>(i0), static_cast<std::size_t>(i1));
    if (g.r(i0) > r_lo + eps) acc += gauss3_panel(f, r_lo, g.r(i0));
    if (g.r(i1) < r_hi - eps) acc += gauss3_panel(f, g.r(i1), r_hi);
    return acc;
}

} // namespace skyrme
