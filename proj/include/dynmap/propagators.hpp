#pragma once

#include <complex>
#include <vector>

#include "dynmap/maps.hpp"
#include "dynmap/models.hpp"

namespace dynmap {

// ---------------------------------------------------------------------------
// Markovian embedding (exact reference)

struct EmbeddingRun {
    DynamicalMapSeries maps;
    /// Eigenvalues -lambda_j + i omega_j of the extended Liouvillian.
    Vector spectrum;
};

/// Powers exp(L_ext dt) and traces out the mode (initial mode state: vacuum).
EmbeddingRun embedding_propagate(const EmbeddingSpec& spec, double dt, std::size_t steps);

/// Independent route: P exp(L_ext t) I_embed evaluated directly at time t.
Superoperator embedding_map_at(const Embedding& emb, double t);

// ---------------------------------------------------------------------------
// Iterative influence-functional path integral

/// Discretized influence-functional coefficients.
///
/// eta[0] is the self term of one step window, eta[k] (k >= 1) couples windows k
/// steps apart. `tail` continues the sequence past kmax (tail[i] = eta_{kmax+1+i})
/// and is only needed for memory-tail folding.
struct InfluenceCoefficients {
    double dt = 0.0;
    std::size_t kmax = 0;
    std::vector<std::complex<double>> eta;
    std::vector<std::complex<double>> tail;

    /// eta_k for any k covered by eta or tail (zero beyond).
    std::complex<double> at(std::size_t k) const;
};

/// Computes eta_0..eta_kmax and, when horizon_steps > kmax, the tail up to horizon_steps.
InfluenceCoefficients eta_coefficients(const SpectralDensity& sd, double temperature, double dt,
                                       std::size_t kmax, std::size_t horizon_steps = 0);

enum class TailFolding { off, on, automatic };

struct QuapiOptions {
    /// Interactions older than kmax steps are attributed to the oldest retained path
    /// point instead of being dropped. This is exact when paths cannot move in the
    /// coupling eigenbasis ([H_S, O] = 0) and uncontrolled otherwise; `automatic`
    /// enables it only in the commuting case.
    TailFolding tail_folding = TailFolding::automatic;
    /// Guard on the augmented tensor size (D^2)^kmax * D^2, in complex entries.
    double memory_budget_entries = 18446744073709551616.0;  // 2^64
};

/// Reduced maps E(t_n, 0), n = 1..steps, from D^2 matrix-unit tomography runs.
DynamicalMapSeries quapi_propagate(const SystemSpec& system, const InfluenceCoefficients& coeffs,
                                   std::size_t steps, const QuapiOptions& options = {});

/// Single trajectory rho(t_n), n = 0..steps.
std::vector<Matrix> quapi_trajectory(const SystemSpec& system, const InfluenceCoefficients& coeffs,
                                     const Matrix& initial, std::size_t steps,
                                     const QuapiOptions& options = {});

}  // namespace dynmap
