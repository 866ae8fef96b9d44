#include "dynmap/timelocal.hpp"

#include <algorithm>

namespace dynmap {

namespace {

Matrix pseudo_inverse(const Matrix& m, double ratio_threshold) {
    const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const double cutoff = s.size() ? s(0) * ratio_threshold : 0.0;
    RealVector inv = RealVector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

LocalMapSeries local_maps(const DynamicalMapSeries& series, double ratio_threshold) {
    LocalMapSeries out;
    out.dt = series.dt();
    out.t0 = series.t0();
    if (series.empty()) return out;

    out.maps.reserve(series.size());
    out.flags.reserve(series.size());
    out.maps.push_back(series.at(1));
    out.flags.push_back({});
    for (std::size_t n = 1; n < series.size(); ++n) {
        const Superoperator current = series.at(n);
        const Superoperator next = series.at(n + 1);
        const double ratio = singular_ratio(current);
        if (ratio >= ratio_threshold) {
            out.maps.push_back(next * invert(current, ratio_threshold));
            out.flags.push_back({false, ratio});
        } else {
            out.maps.emplace_back(next.matrix() * pseudo_inverse(current.matrix(), ratio_threshold));
            out.flags.push_back({true, ratio});
        }
    }
    return out;
}

std::vector<ProfilePoint> stationarity_profile(const LocalMapSeries& local) {
    if (local.size() < 2) throw std::invalid_argument("stationarity profile needs two local maps");
    std::vector<ProfilePoint> out;
    out.reserve(local.size() - 1);
    for (std::size_t n = 1; n < local.size(); ++n) {
        out.push_back({local.time(n), frobenius_diff(local.maps[n], local.maps[n - 1])});
    }
    return out;
}

Superoperator stationary_map(const LocalMapSeries& local, std::size_t cutoff_steps,
                             const TimeLocalOptions& options) {
    if (cutoff_steps == 0 || cutoff_steps > local.size()) {
        throw CutoffExceedsData("cutoff of " + std::to_string(cutoff_steps) +
                                " steps needs that many local maps, have " +
                                std::to_string(local.size()));
    }
    const std::size_t m = std::clamp<std::size_t>(options.average_last, 1, cutoff_steps);
    Matrix sum = Matrix::Zero(local.maps.front().liouville_dim(), local.maps.front().liouville_dim());
    for (std::size_t i = cutoff_steps - m; i < cutoff_steps; ++i) {
        if (local.flags[i].flagged) {
            throw StationaryMapFlagged("local map at t = " + std::to_string(local.time(i)) +
                                       " came from a near-singular inversion (ratio " +
                                       std::to_string(local.flags[i].singular_ratio) + ")");
        }
        sum += local.maps[i].matrix();
    }
    return Superoperator(sum / static_cast<double>(m));
}

void extrapolate_tl(const LocalMapSeries& local, const Matrix& initial, std::size_t cutoff_steps,
                    std::size_t total_steps, const StateObserver& observe,
                    const TimeLocalOptions& options) {
    if (total_steps < cutoff_steps) throw std::invalid_argument("total_steps must be at least the cutoff");
    const Superoperator stationary = stationary_map(local, cutoff_steps, options);
    if (initial.rows() != local.dim() || initial.cols() != local.dim()) {
        throw DimensionMismatch("initial state does not match local map dimension");
    }

    Vector rho = vectorize(initial);
    if (observe) observe(0, initial);
    for (std::size_t n = 0; n < total_steps; ++n) {
        // t_n <= tau_c  <=>  n < K uses the exact local map E(t_n + dt, t_n)
        const Matrix& step = n < cutoff_steps ? local.maps[n].matrix() : stationary.matrix();
        rho = step * rho;
        if (observe) observe(n + 1, devectorize(rho));
    }
}

std::vector<Matrix> extrapolate_tl(const LocalMapSeries& local, const Matrix& initial,
                                   std::size_t cutoff_steps, std::size_t total_steps,
                                   const TimeLocalOptions& options) {
    std::vector<Matrix> states;
    states.reserve(total_steps + 1);
    extrapolate_tl(local, initial, cutoff_steps, total_steps,
                   [&](std::size_t, const Matrix& rho) { states.push_back(rho); }, options);
    return states;
}

SpectralStability spectral_stability(const Superoperator& map, double tolerance) {
    const Eigen::ComplexEigenSolver<Matrix> es(map.matrix(), false);
    const Vector& ev = es.eigenvalues();
    SpectralStability out;
    for (Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) > out.max_modulus) {
            out.max_modulus = std::abs(ev(i));
            out.dominant_eigenvalue = ev(i);
        }
    }
    out.stable = out.max_modulus <= 1.0 + tolerance;
    return out;
}

}  // namespace dynmap
