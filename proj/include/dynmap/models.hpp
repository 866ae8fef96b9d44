#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "dynmap/linalg.hpp"

namespace dynmap {

enum class SpectralKind { subohmic, drude_lorentz, qd_phonon, custom_table };

/// Bath spectral density J(w) for w >= 0 (frequencies in the model's base unit).
class SpectralDensity {
public:
    /// 2 alpha w^s w_c^(1-s) exp(-w / w_c)
    static SpectralDensity subohmic(double alpha, double s, double omega_c);
    /// 2 lambda gamma w / (w^2 + gamma^2)
    static SpectralDensity drude_lorentz(double lambda, double gamma);
    /// w^3 (c_e exp(-w^2/w_e^2) - c_h exp(-w^2/w_h^2)); c_h is used with its sign.
    static SpectralDensity qd_phonon(double c_e, double c_h, double omega_e, double omega_h);
    /// Piecewise-linear interpolation of (omega, J) samples, zero outside the table.
    static SpectralDensity custom_table(std::vector<double> omega, std::vector<double> values);

    SpectralKind kind() const noexcept { return kind_; }
    /// Parameters in constructor order (empty for tables).
    const std::vector<double>& parameters() const noexcept { return params_; }

    /// Throws NegativeFrequency for w < 0.
    double operator()(double omega) const;

    /// Maximum of J over its support (located numerically).
    double peak() const;
    /// Frequency beyond which J stays below rel * peak(), doubled.
    double upper_cutoff(double rel = 1e-12) const;

private:
    double evaluate(double omega) const;

    SpectralKind kind_ = SpectralKind::custom_table;
    std::vector<double> params_;
    std::vector<double> table_omega_;
    std::vector<double> table_values_;
};

double spectral_density_eval(const SpectralDensity& sd, double omega);

/// Loads a two-column CSV (omega, J) with an optional header row.
SpectralDensity load_spectral_table(const std::string& path);

/// coth(w / 2T), with the T = 0 limit 1.
double thermal_factor(double omega, double temperature);

/// Frequency where `envelope` (decreasing past its maximum) drops below rel * max,
/// doubled. Scans a logarithmic grid between lo and hi.
double envelope_cutoff(const std::function<double(double)>& envelope, double rel, double lo = 1e-8,
                       double hi = 1e14);

/// C(t) = int_0^inf J(w) [coth(w/2T) cos(wt) - i sin(wt)] dw, relative accuracy 1e-8.
/// The integral is truncated at the density's upper_cutoff(), which also defines C(0)
/// for densities with a slow high-frequency tail.
class BathCorrelation {
public:
    BathCorrelation(const SpectralDensity& sd, double temperature);
    std::complex<double> operator()(double t) const;
    double cutoff() const noexcept { return wmax_; }

private:
    SpectralDensity sd_;
    double temperature_;
    double wmax_;
    double peak_;
};

std::complex<double> bath_correlation(const SpectralDensity& sd, double temperature, double t);

struct SystemSpec {
    Matrix hamiltonian;
    Matrix coupling;
    double temperature = 0.0;

    Index dim() const noexcept { return hamiltonian.rows(); }
    /// Throws DimensionMismatch / std::invalid_argument on non-Hermitian input.
    void validate() const;
};

struct EmbeddingSpec {
    SystemSpec system;
    double mode_frequency = 1.0;
    double coupling = 0.0;
    double decay = 0.0;
    int n_max = 1;
};

inline constexpr Index kMaxEmbeddingDim = 64;

/// Extended Liouvillian for H_S + W b^dag b + g (b^dag + b) O with dissipator sqrt(kappa) b.
/// Extended Hilbert index is s * (n_max + 1) + m (system slow, mode fast).
struct Embedding {
    Generator generator;
    Index system_dim = 0;
    Index mode_levels = 0;
    /// D_ext^2 x D^2: vec(rho) -> vec(rho (x) |0><0|).
    Matrix embed;
    /// D^2 x D_ext^2: partial trace over the mode.
    Matrix trace_out;
};

Embedding build_embedding(const EmbeddingSpec& spec);

/// Mode number operator b^dag b on the extended space.
Matrix embedding_number_operator(const Embedding& emb);

struct PaperModel {
    std::string name;
    SystemSpec system;
    SpectralDensity density;
    double dt = 0.0;
    double t_ref = 0.0;
};

/// subohmic_fig1, drude_lorentz_fig2, qd_phonon_fig3; throws UnknownModel otherwise.
PaperModel paper_model(const std::string& name);

}  // namespace dynmap
