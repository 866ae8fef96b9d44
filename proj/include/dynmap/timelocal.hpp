#pragma once

#include <vector>

#include "dynmap/maps.hpp"
#include "dynmap/ttm.hpp"

namespace dynmap {

/// Conditioning record of the inversion behind one local map.
struct LocalMapFlag {
    bool flagged = false;
    /// sigma_min / sigma_max of the inverted map E(t_n, t0) (1 for n = 0).
    double singular_ratio = 1.0;
};

/// Local maps E(t_n + dt, t_n) for n = 0..N-1.
struct LocalMapSeries {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<Superoperator> maps;
    std::vector<LocalMapFlag> flags;

    std::size_t size() const noexcept { return maps.size(); }
    Index dim() const noexcept { return maps.empty() ? 0 : maps.front().dim(); }
    double time(std::size_t n) const noexcept { return t0 + static_cast<double>(n) * dt; }
};

/// Entry n = E(t_{n+1}) E(t_n)^{-1}. Ill-conditioned inversions are replaced by the
/// least-squares solution E(t_{n+1}) E(t_n)^+ and flagged.
LocalMapSeries local_maps(const DynamicalMapSeries& series, double ratio_threshold = 1e-8);

/// (t_n, ||E(t_n + dt, t_n) - E(t_n, t_n - dt)||_F) for n = 1..N-1.
std::vector<ProfilePoint> stationarity_profile(const LocalMapSeries& local);

struct TimeLocalOptions {
    /// Number of trailing local maps averaged into the stationary map (1 = plain E_s).
    std::size_t average_last = 1;
};

/// E_s := E(tau_c, tau_c - dt) with tau_c = K dt, or the mean of the last m local maps
/// ending there. Throws StationaryMapFlagged if any contributing map is flagged.
Superoperator stationary_map(const LocalMapSeries& local, std::size_t cutoff_steps,
                             const TimeLocalOptions& options = {});

/// Propagates with the local maps up to the cutoff, then repeats E_s.
void extrapolate_tl(const LocalMapSeries& local, const Matrix& initial, std::size_t cutoff_steps,
                    std::size_t total_steps, const StateObserver& observe,
                    const TimeLocalOptions& options = {});

std::vector<Matrix> extrapolate_tl(const LocalMapSeries& local, const Matrix& initial,
                                   std::size_t cutoff_steps, std::size_t total_steps,
                                   const TimeLocalOptions& options = {});

struct SpectralStability {
    Complex dominant_eigenvalue;
    double max_modulus = 0.0;
    bool stable = true;
};

/// Largest-modulus eigenvalue and whether repeated application can grow without bound.
SpectralStability spectral_stability(const Superoperator& map, double tolerance = 1e-9);

}  // namespace dynmap
