#include "dynmap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "dynmap/errors.hpp"

namespace dynmap::quad {

namespace {

struct Panel {
    double a;
    double b;
    std::complex<double> value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const Integrand& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    double err = 0.0;
    const std::complex<double> v = GK::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

}  // namespace

Result adaptive(const Integrand& f, const std::vector<double>& breakpoints, double abs_tol,
                double rel_tol, std::size_t max_intervals) {
    if (breakpoints.size() < 2) return {};
    std::priority_queue<Panel> heap;
    std::complex<double> total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) continue;
        Panel p = evaluate(f, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    const std::size_t initial = heap.size();
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (heap.size() >= initial + max_intervals || heap.empty()) {
            throw QuadratureFailure("adaptive quadrature exhausted its interval budget", total_err);
        }
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureFailure("adaptive quadrature reached machine resolution", total_err);
        }
        heap.pop();
        const Panel left = evaluate(f, worst.a, mid);
        const Panel right = evaluate(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from the panels to shed accumulated update round-off.
    std::complex<double> sum = 0.0;
    double err = 0.0;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : panels) {
        sum += p.value;
        err += p.error;
    }
    return {sum, err};
}

namespace {

template <class Integrator>
Result fourier(Integrator& integrator, const std::function<double(double)>& f, double t,
               double rel_tol) {
    if (!(t > 0.0)) throw std::invalid_argument("Fourier quadrature needs t > 0");
    // int_0^inf f(w) K(w t) dw = (1/t) int_0^inf f(x/t) K(x) dx keeps the kernel
    // frequency fixed, so the integrator's cached node tables are reused.
    const double inv_t = 1.0 / t;
    auto g = [&](double x) { return f(x * inv_t); };
    const auto [value, rel_err] = integrator.integrate(g, 1.0);
    if (!std::isfinite(value) || rel_err > std::max(rel_tol, 1e-6)) {
        throw QuadratureFailure("Fourier quadrature did not converge", rel_err);
    }
    return {value * inv_t, std::abs(value * inv_t) * rel_err};
}

}  // namespace

Result fourier_cos(const std::function<double(double)>& f, double t, double rel_tol) {
    thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator;
    return fourier(integrator, f, t, rel_tol);
}

Result fourier_sin(const std::function<double(double)>& f, double t, double rel_tol) {
    thread_local boost::math::quadrature::ooura_fourier_sin<double> integrator;
    return fourier(integrator, f, t, rel_tol);
}

std::vector<double> panel_breakpoints(double upper, double scale, double max_width,
                                      std::size_t max_panels) {
    std::vector<double> bp{0.0};
    if (!(upper > 0.0)) return bp;
    scale = std::min(scale, upper);
    // log-spaced refinement toward 0 resolves power-law onsets such as w^0.7
    for (int e = -12; e <= 0; ++e) {
        const double x = scale * std::pow(10.0, e);
        if (x > bp.back()) bp.push_back(x);
    }
    // geometric growth above `scale`, capped at max_width
    const double width = std::max(max_width, (upper - scale) / static_cast<double>(max_panels));
    double x = scale;
    while (true) {
        x += std::min(width, x);
        if (x >= upper) break;
        bp.push_back(x);
    }
    if (upper > bp.back()) bp.push_back(upper);
    return bp;
}

std::complex<double> gauss20(const Integrand& f, double a, double b) {
    using G = boost::math::quadrature::gauss<double, 20>;
    return G::integrate(f, a, b);
}

}  // namespace dynmap::quad
