/* Finite-difference weight generation (Fornberg's recursion).
 *
 * Given arbitrary node locations x_0..x_{n-1} and an evaluation point x0,
 * returns weights w such that  f^(m)(x0) ~= sum_j w[j] f(x_j).
 * Used for the one-sided boundary closures and for off-grid interpolation,
 * so the same machinery backs derivatives and polynomial interpolation
 * (m = 0 gives Lagrange interpolation weights).
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace skyrme {

inline std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("fd_weights: empty node set");
    if (m < 0 || m >= n) throw std::invalid_argument("fd_weights: derivative order out of range");

    // c[k][j]: weight of node j for the k-th derivative, built up incrementally.
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = (i < m) ? i : m;
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c[m];
}

} // namespace skyrme
