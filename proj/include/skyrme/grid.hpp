/* Radial grids and fields for the spherically symmetric solvers.
 *
 * Everything lives on a uniform grid r_i = i*h (vertex-centered, r=0 is a
 * grid point) or r_i = (i+1/2)*h (cell-centered).  Fields carry a parity
 * tag so that derivative and interpolation stencils can reflect through
 * the origin instead of dropping an order there.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skyrme {

enum class Parity { odd, even };

struct RadialGrid {
    double h = 0.0;        // spacing
    std::size_t n = 0;     // number of points
    bool staggered = false; // true: r_i = (i+1/2)h, origin not a point

    RadialGrid() = default;
    RadialGrid(double spacing, std::size_t npts, bool cell_centered = false)
        : h(spacing), n(npts), staggered(cell_centered) {
        if (!(h > 0.0)) throw std::invalid_argument("RadialGrid: spacing must be positive");
        if (n < 8) throw std::invalid_argument("RadialGrid: need at least 8 points");
    }

    double r(std::size_t i) const { return staggered ? (static_cast<double>(i) + 0.5) * h : static_cast<double>(i) * h; }
    double r_max() const { return r(n - 1); }
    bool has_origin_point() const { return !staggered; }

    bool operator==(const RadialGrid& o) const {
        return h == o.h && n == o.n && staggered == o.staggered;
    }
};

// Build a vertex-centered grid covering [0, r_max] with spacing h.
// r_max is rounded up to the nearest multiple of h.
inline RadialGrid make_grid(double h, double r_max) {
    if (!(h > 0.0) || !(r_max > 0.0))
        throw std::invalid_argument("make_grid: h and r_max must be positive");
    auto n = static_cast<std::size_t>(r_max / h + 0.5) + 1;
    while ((static_cast<double>(n) - 1.0) * h < r_max - 1e-12 * r_max) ++n;
    return RadialGrid(h, n);
}

struct ScalarField {
    RadialGrid grid;
    Parity parity = Parity::even;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(const RadialGrid& g, Parity p, double fill = 0.0)
        : grid(g), parity(p), v(g.n, fill) {}

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }

    // Value at a reflected index j < 0 (ghost region across the origin).
    // Vertex grids mirror about i=0, cell grids about the face at r=0.
    double reflected(long j) const {
        long m = grid.staggered ? (-1 - j) : -j;
        double s = (parity == Parity::odd) ? -1.0 : 1.0;
        return s * v[static_cast<std::size_t>(m)];
    }
};

// A sampled scalar quantity against time.  Strictly increasing t.
struct TimeSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> value;

    void push(double time, double val) {
        if (!t.empty() && !(time > t.back()))
            throw std::invalid_argument("TimeSeries: sample times must increase");
        t.push_back(time);
        value.push_back(val);
    }
    std::size_t size() const { return t.size(); }
};

inline void require_finite(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw std::runtime_error(std::string(what) + ": non-finite value at index " + std::to_string(i));
}

} // namespace skyrme
