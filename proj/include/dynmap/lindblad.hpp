#pragma once

#include <string>
#include <vector>

#include "dynmap/maps.hpp"
#include "dynmap/settings.hpp"
#include "dynmap/timelocal.hpp"

namespace dynmap {

/// Hilbert-Schmidt orthonormal, traceless, Hermitian generalized Gell-Mann matrices
/// (D^2 - 1 of them).
std::vector<Matrix> gell_mann_basis(Index dim);

/// L rho = -i[H, rho] + sum_j rate_j (L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho}).
///
/// Operators are traceless, mutually Hilbert-Schmidt orthogonal, and normalized to
/// unit spectral norm. Rates are sorted by descending magnitude with sign kept.
struct CanonicalForm {
    Matrix hamiltonian;
    std::vector<double> rates;
    std::vector<Matrix> operators;
    /// Set when two raw Kossakowski eigenvalues coincide; operators within such a
    /// block are only defined up to a unitary rotation.
    bool degenerate_rates = false;
    /// Relative Frobenius residual of the least-squares fit (nonzero for generators
    /// that do not preserve Hermiticity).
    double residual = 0.0;
};

CanonicalForm canonical_decompose(const Generator& gen, const NumericsSettings& settings = {});

Generator reassemble(const CanonicalForm& form);

/// One row of the rates table. Flagged rows carry no rates.
struct RateRow {
    double t = 0.0;
    std::vector<double> rates;
    double min_rate = 0.0;
    bool flagged = false;
    std::string note;
};

/// logm -> canonical_decompose for every local map.
std::vector<RateRow> rate_series(const LocalMapSeries& local, const NumericsSettings& settings = {});

}  // namespace dynmap
