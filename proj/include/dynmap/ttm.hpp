#pragma once

#include <functional>
#include <vector>

#include "dynmap/maps.hpp"

namespace dynmap {

/// (time, value) sample used by every diagnostic profile.
struct ProfilePoint {
    double t = 0.0;
    double value = 0.0;
};

/// Transfer tensors T(t_n), n = 1..N, with their Frobenius norms.
struct TransferTensorSeries {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<Superoperator> tensors;
    std::vector<double> norms;

    std::size_t size() const noexcept { return tensors.size(); }
    Index dim() const noexcept { return tensors.empty() ? 0 : tensors.front().dim(); }
};

/// T(t_n) = E(t_n) - sum_{m=1}^{n-1} T(t_{n-m}) E(t_m).
TransferTensorSeries decompose(const DynamicalMapSeries& series);

/// Inverse of decompose: E(t_n) = T(t_n) + sum_{m=1}^{n-1} T(t_{n-m}) E(t_m).
DynamicalMapSeries resum(const TransferTensorSeries& tensors);

using StateObserver = std::function<void(std::size_t n, const Matrix& rho)>;

/// rho(t_n) = sum_{k=max(0,n-K)}^{n-1} T(t_{n-k}) rho(t_k) for n = 1..total_steps.
/// Only the last K states are kept; the observer sees every state including n = 0.
void extrapolate(const TransferTensorSeries& tensors, const Matrix& initial,
                 std::size_t cutoff_steps, std::size_t total_steps, const StateObserver& observe);

/// Convenience overload returning rho(t_0) .. rho(t_total).
std::vector<Matrix> extrapolate(const TransferTensorSeries& tensors, const Matrix& initial,
                                std::size_t cutoff_steps, std::size_t total_steps);

/// (n dt, ||T(t_n)||_F) for n = 1..N.
std::vector<ProfilePoint> tensor_norm_profile(const TransferTensorSeries& tensors);

}  // namespace dynmap
