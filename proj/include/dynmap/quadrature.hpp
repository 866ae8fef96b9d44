#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace dynmap::quad {

struct Result {
    std::complex<double> value;
    double error = 0.0;
};

using Integrand = std::function<std::complex<double>(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration over the panels defined by
/// consecutive breakpoints. Bisects the panel with the largest error estimate until
/// error <= max(abs_tol, rel_tol * |value|). Throws QuadratureFailure when more than
/// max_intervals bisections are needed.
Result adaptive(const Integrand& f, const std::vector<double>& breakpoints, double abs_tol,
                double rel_tol, std::size_t max_intervals = 200000);

/// int_0^inf f(w) cos(w t) dw and int_0^inf f(w) sin(w t) dw for t > 0
/// (double-exponential Ooura-Mori quadrature).
Result fourier_cos(const std::function<double(double)>& f, double t, double rel_tol = 1e-9);
Result fourier_sin(const std::function<double(double)>& f, double t, double rel_tol = 1e-9);

/// Breakpoints on [0, upper]: log-spaced below `scale`, then doubling panels capped
/// at `max_width`.
std::vector<double> panel_breakpoints(double upper, double scale, double max_width,
                                      std::size_t max_panels = 200000);

/// Fixed 20-point Gauss-Legendre rule on [a, b].
std::complex<double> gauss20(const Integrand& f, double a, double b);

}  // namespace dynmap::quad
