/* Decay-law extraction from observer time series.
 *
 * Two fitters: a damped sinusoid A e^{-Gamma t} sin(Omega t + delta) for
 * the ringdown stage, fitted by Gauss-Newton on the raw samples with
 * starting values read off the zero crossings and the peak envelope; and
 * a power law with first correction, ln|y| ~ a - b ln t + c/t, fitted by
 * linear least squares in log space so every decade carries the same
 * weight.
 *
 * Tail windows near the double-precision floor are handled by a guard:
 * samples below 1e3 times the series' estimated rounding floor are
 * excluded, and a window helper suggests where the monotone tail begins.
 */
#pragma once

#include "skyrme/grid.hpp"

namespace skyrme {

struct RingdownFit {
    double amplitude = 0.0;
    double Gamma = 0.0;
    double Omega = 0.0;
    double phase = 0.0;     // radians, in (-pi, pi]
    double t1 = 0.0, t2 = 0.0;
    double residual = 0.0;  // rms misfit in raw space over the window
    int iterations = 0;
};

struct PowerLawFit {
    double offset = 0.0;      // a
    double exponent = 0.0;    // b
    double correction = 0.0;  // c
    double t1 = 0.0, t2 = 0.0;
    double residual = 0.0;    // rms misfit of ln|y|
    int samples = 0;          // samples surviving the floor guard
};

struct TailCoefficient {
    double value = 0.0;  // median of y t^p / r0 over the window
    double lo = 0.0;     // lower quartile
    double hi = 0.0;     // upper quartile
    double t1 = 0.0, t2 = 0.0;
    int samples = 0;
};

// Nonlinear fit of A e^{-Gamma t} sin(Omega t + delta) over [t1, t2].
// Needs an oscillating signal: fewer than two sign changes in the window
// is rejected, as is a fit that converges to growth instead of decay.
RingdownFit fit_ringdown(const TimeSeries& series, double t1, double t2);

// Least squares of ln|y| against a - b ln t + c/t over [t1, t2].  The
// window must be sign-definite, span at least a factor 3 in t after the
// floor guard, and produce a decaying exponent.  floor_level overrides
// the guard with an absolute cut when non-negative; the default keeps
// the automatic 1e-10-of-peak rule.  Pass a measured level (e.g. ten
// times the post-passage residue of a control run with the same data)
// when the automatic rule is known to be too cautious for the series.
PowerLawFit fit_power_law(const TimeSeries& series, double t1, double t2,
                          double floor_level = -1.0);

// Median of y t^exponent / r0 over the window, with the interquartile
// band as the uncertainty.  |y| must decrease monotonically across the
// window (the signature of a settled tail).
TailCoefficient estimate_tail_coefficient(const TimeSeries& series, double t1, double t2,
                                          double r0, double exponent = 5.0);

// First time from which |y| decreases monotonically for at least
// min_run consecutive steps: a data-driven guess for the start of the
// tail window once ringing is over.  Pick the cadence so min_run steps
// outlast half an oscillation period, or the rule fires early.
double suggest_tail_window_start(const TimeSeries& series, int min_run = 50);

} // namespace skyrme
