/* Classical RK4 steppers.
 *
 * Two shapes: a fixed-size version for small ODE systems (shooting, mode
 * integrations) and an in-place vector version for stacked field states.
 * Both are plain RK4 with no adaptivity; callers choose the step.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace skyrme {

// rhs signature: rhs(t, y) -> dy/dt
template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(Rhs&& rhs, double t, double dt, const std::array<double, N>& y) {
    std::array<double, N> k1 = rhs(t, y);
    std::array<double, N> u;
    for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + 0.5 * dt * k1[i];
    std::array<double, N> k2 = rhs(t + 0.5 * dt, u);
    for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + 0.5 * dt * k2[i];
    std::array<double, N> k3 = rhs(t + 0.5 * dt, u);
    for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + dt * k3[i];
    std::array<double, N> k4 = rhs(t + dt, u);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(out[i]))
            throw std::runtime_error("rk4_step: non-finite state at t=" + std::to_string(t) + ", component " + std::to_string(i));
    }
    return out;
}

struct Rk4Scratch {
    std::vector<double> k1, k2, k3, k4, u;
    void resize(std::size_t n) {
        k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); u.resize(n);
    }
};

// In-place step for a stacked state vector.  rhs(t, y, dydt) fills dydt.
// The stage combination loops are simple maps, so results do not depend
// on how rhs chooses to parallelize its sweep.
template <class Rhs>
void rk4_step_inplace(Rhs&& rhs, double t, double dt, std::vector<double>& y, Rk4Scratch& s) {
    const std::size_t n = y.size();
    s.resize(n);
    rhs(t, y, s.k1);
    for (std::size_t i = 0; i < n; ++i) s.u[i] = y[i] + 0.5 * dt * s.k1[i];
    rhs(t + 0.5 * dt, s.u, s.k2);
    for (std::size_t i = 0; i < n; ++i) s.u[i] = y[i] + 0.5 * dt * s.k2[i];
    rhs(t + 0.5 * dt, s.u, s.k3);
    for (std::size_t i = 0; i < n; ++i) s.u[i] = y[i] + dt * s.k3[i];
    rhs(t + dt, s.u, s.k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += dt / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

} // namespace skyrme
