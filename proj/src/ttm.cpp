#include "dynmap/ttm.hpp"

#include <deque>

namespace dynmap {

TransferTensorSeries decompose(const DynamicalMapSeries& series) {
    if (series.empty()) throw std::invalid_argument("cannot decompose an empty map series");
    const auto& maps = series.maps();
    const std::size_t n_max = maps.size();

    TransferTensorSeries out;
    out.dt = series.dt();
    out.t0 = series.t0();
    out.tensors.reserve(n_max);
    out.norms.reserve(n_max);
    // tensors[i] holds T(t_{i+1}), maps[i] holds E(t_{i+1})
    for (std::size_t n = 1; n <= n_max; ++n) {
        Matrix t = maps[n - 1].matrix();
        for (std::size_t m = 1; m < n; ++m) {
            t.noalias() -= out.tensors[n - m - 1].matrix() * maps[m - 1].matrix();
        }
        out.norms.push_back(t.norm());
        out.tensors.emplace_back(std::move(t));
    }
    return out;
}

DynamicalMapSeries resum(const TransferTensorSeries& tensors) {
    const auto& t = tensors.tensors;
    std::vector<Superoperator> maps;
    maps.reserve(t.size());
    for (std::size_t n = 1; n <= t.size(); ++n) {
        Matrix e = t[n - 1].matrix();
        for (std::size_t m = 1; m < n; ++m) {
            e.noalias() += t[n - m - 1].matrix() * maps[m - 1].matrix();
        }
        maps.emplace_back(std::move(e));
    }
    return DynamicalMapSeries(tensors.dt, tensors.t0, std::move(maps));
}

void extrapolate(const TransferTensorSeries& tensors, const Matrix& initial,
                 std::size_t cutoff_steps, std::size_t total_steps, const StateObserver& observe) {
    if (cutoff_steps == 0 || cutoff_steps > tensors.size()) {
        throw CutoffExceedsData("cutoff of " + std::to_string(cutoff_steps) +
                                " steps needs that many transfer tensors, have " +
                                std::to_string(tensors.size()));
    }
    if (total_steps < cutoff_steps) {
        throw std::invalid_argument("total_steps must be at least the cutoff");
    }
    if (initial.rows() != tensors.dim() || initial.cols() != tensors.dim()) {
        throw DimensionMismatch("initial state does not match tensor dimension");
    }

    // history.front() is the most recent state rho(t_{n-1})
    std::deque<Vector> history;
    history.push_front(vectorize(initial));
    if (observe) observe(0, initial);

    Vector next(initial.size());
    for (std::size_t n = 1; n <= total_steps; ++n) {
        next.setZero();
        const std::size_t terms = std::min(n, cutoff_steps);
        for (std::size_t j = 1; j <= terms; ++j) {
            next.noalias() += tensors.tensors[j - 1].matrix() * history[j - 1];
        }
        history.push_front(next);
        if (history.size() > cutoff_steps) history.pop_back();
        if (observe) observe(n, devectorize(next));
    }
}

std::vector<Matrix> extrapolate(const TransferTensorSeries& tensors, const Matrix& initial,
                                std::size_t cutoff_steps, std::size_t total_steps) {
    std::vector<Matrix> states;
    states.reserve(total_steps + 1);
    extrapolate(tensors, initial, cutoff_steps, total_steps,
                [&](std::size_t, const Matrix& rho) { states.push_back(rho); });
    return states;
}

std::vector<ProfilePoint> tensor_norm_profile(const TransferTensorSeries& tensors) {
    std::vector<ProfilePoint> out;
    out.reserve(tensors.size());
    for (std::size_t n = 1; n <= tensors.size(); ++n) {
        out.push_back({static_cast<double>(n) * tensors.dt, tensors.norms[n - 1]});
    }
    return out;
}

}  // namespace dynmap
