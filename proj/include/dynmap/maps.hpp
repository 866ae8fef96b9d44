#pragma once

#include <span>
#include <vector>

#include "dynmap/linalg.hpp"
#include "dynmap/settings.hpp"

namespace dynmap {

/// Column-stacking vectorization: entry (i, j) goes to position i + D j.
Vector vectorize(const Matrix& rho);
Matrix devectorize(const Vector& v);

/// Maps E(t0 + n dt, t0) for n = 1..N on a uniform grid.
class DynamicalMapSeries {
public:
    DynamicalMapSeries() = default;
    DynamicalMapSeries(double dt, double t0, std::vector<Superoperator> maps);

    double dt() const noexcept { return dt_; }
    double t0() const noexcept { return t0_; }
    Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return maps_.size(); }
    bool empty() const noexcept { return maps_.empty(); }

    /// E(t_n, t0), 1-based as in the time grid. n = 0 is the identity.
    Superoperator at(std::size_t n) const;
    const std::vector<Superoperator>& maps() const noexcept { return maps_; }
    double time(std::size_t n) const noexcept { return t0_ + static_cast<double>(n) * dt_; }

    /// First n entries.
    DynamicalMapSeries prefix(std::size_t n) const;

private:
    double dt_ = 0.0;
    double t0_ = 0.0;
    Index dim_ = 0;
    std::vector<Superoperator> maps_;
};

/// Matrix units E_ij in column-stacking order (E_ij at position i + D j).
std::vector<Matrix> matrix_unit_basis(Index dim);

/// Hermitian, trace-one tomography states for D = 2:
/// |0><0|, |1><1|, |+><+|, |+i><+i|.
std::vector<Matrix> pauli_state_basis();

/// Builds E(t_n, t0) from trajectories rho_b(t_n), n = 1..N, of each basis state rho_b(t0).
DynamicalMapSeries from_trajectories(std::span<const Matrix> basis_states,
                                     std::span<const std::vector<Matrix>> trajectories,
                                     double dt, double t0,
                                     const NumericsSettings& settings = {});

/// Descending singular values of the D^2 x D^2 matrix.
RealVector singular_values(const Superoperator& map);

/// sigma_min / sigma_max (0 for the zero map).
double singular_ratio(const Superoperator& map);

/// Exact inverse; throws NearSingularMap below the ratio threshold.
Superoperator invert(const Superoperator& map, double ratio_threshold = 1e-8);

/// Principal logarithm divided by dt.
Generator logm(const Superoperator& map, double dt, const NumericsSettings& settings = {});

/// exp(gen * dt) by scaling and squaring with a Pade approximant.
Superoperator expm(const Generator& gen, double dt);

double frobenius_diff(const Superoperator& a, const Superoperator& b);

/// Maximum over the columns of |vec(I)^dagger E - vec(I)^dagger|.
double trace_preservation_defect(const Superoperator& map);

}  // namespace dynmap
