#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynmap/lindblad.hpp"
#include "dynmap/maps.hpp"
#include "dynmap/models.hpp"
#include "dynmap/propagators.hpp"
#include "dynmap/settings.hpp"
#include "dynmap/timelocal.hpp"
#include "dynmap/ttm.hpp"

namespace dynmap {

enum class PropagatorKind { quapi, embedding, lindblad };

/// Everything needed to produce short-time maps and the long-time reference.
struct ModelConfig {
    std::string name;
    PropagatorKind propagator = PropagatorKind::quapi;
    SystemSpec system;
    std::optional<SpectralDensity> density;
    // quapi
    std::size_t kmax = 3;
    QuapiOptions quapi;
    // embedding
    double mode_frequency = 1.0;
    double mode_coupling = 0.0;
    double mode_decay = 0.0;
    int n_max = 1;
    // lindblad: collapse operators with their rates
    std::vector<Matrix> lindblad_operators;
    std::vector<double> lindblad_rates;

    EmbeddingSpec embedding_spec() const;
    Generator lindblad_generator() const;
};

struct SweepConfig {
    ModelConfig model;
    double dt = 0.0;
    std::size_t n_short = 0;
    double t_ref = 0.0;
    std::vector<double> tau_c;
    Matrix observable;
    Matrix initial_state;
    std::filesystem::path output_dir = ".";
    std::size_t workers = 1;
    double singular_threshold = 1e-8;
    TimeLocalOptions tl_options;
    NumericsSettings settings;

    /// Nearest grid step to time t.
    std::size_t steps_for(double t) const;
    std::size_t n_ref() const { return steps_for(t_ref); }
    /// Throws ConfigError when t_ref <= max(tau_c), the short-time data end before
    /// max(tau_c), or a tau_c rounds to zero steps.
    void validate() const;
};

/// Built-in preset: the three spin-boson models plus "embedding_mode", the damped-mode
/// model with a closed-form extended-space reference.
SweepConfig preset_config(const std::string& name);

/// Parses the INI model file; a `preset` key in [system] seeds the defaults.
SweepConfig load_config(const std::filesystem::path& path);
SweepConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");

/// Reads "re" or "re:im" entries, rows separated by ';'.
Matrix parse_matrix(const std::string& text);
/// "sx", "sy", "sz", "sp", "sm", "id" or a literal matrix.
Matrix parse_operator(const std::string& text);

// ---------------------------------------------------------------------------

struct ObservablePoint {
    double t = 0.0;
    double value = 0.0;
    double imag_residue = 0.0;
};

using WarningSink = std::function<void(const std::string&)>;

/// Tr(O rho(t_n)). Warns through `warn` when |Im| exceeds 1e-8.
std::vector<ObservablePoint> observable_series(const std::vector<Matrix>& states, const Matrix& observable,
                                               double dt, double t0 = 0.0, const WarningSink& warn = {});

/// 0.5 * || a - b ||_1 for Hermitian a - b.
double trace_distance(const Matrix& a, const Matrix& b);

/// Short-time maps E(t_n, 0), n = 1..count.
DynamicalMapSeries generate_maps(const SweepConfig& config, std::size_t count);

/// rho(t_n) for n = 0..steps from the reference propagator.
std::vector<Matrix> reference_trajectory(const SweepConfig& config, std::size_t steps);

/// Influence coefficients for a QUAPI model over `horizon` steps.
InfluenceCoefficients model_eta(const SweepConfig& config, std::size_t horizon);

struct CompareRow {
    double tau_c = 0.0;
    double err_ttm = 0.0;
    double err_tl = 0.0;
    bool tl_flagged = false;
    bool tl_spectral_stable = true;
    double trace_distance_ttm = 0.0;
    double trace_distance_tl = 0.0;
};

struct CompareResult {
    DynamicalMapSeries maps;
    TransferTensorSeries tensors;
    LocalMapSeries local;
    std::vector<Matrix> reference;
    std::vector<CompareRow> rows;
};

/// Extrapolates from each tau_c with both methods and scores them against the reference at t_ref.
CompareResult run_compare(const SweepConfig& config);

/// Same, reusing already generated short-time maps and reference trajectory.
std::vector<CompareRow> compare_rows(const SweepConfig& config, const TransferTensorSeries& tensors,
                                     const LocalMapSeries& local, const Matrix& reference_at_t_ref);

// CSV products (header names are part of the file contract)
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);
void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile, const std::string& value_column);
void write_singular_values_csv(std::ostream& out, const DynamicalMapSeries& maps, double ratio_threshold);
void write_flags_csv(std::ostream& out, const LocalMapSeries& local);
void write_rates_csv(std::ostream& out, const std::vector<RateRow>& rows, Index dim);
void write_eta_csv(std::ostream& out, const InfluenceCoefficients& coeffs);
void write_observable_csv(std::ostream& out, const std::vector<ObservablePoint>& series);
/// Long format (tau_c, t, value) for several extrapolated trajectories.
void write_extrapolation_csv(std::ostream& out, const std::vector<double>& tau_c,
                             const std::vector<std::vector<ObservablePoint>>& series);

/// Writes compare.csv, stationarity.csv, tensor_norms.csv, singular_values.csv,
/// flags.csv and observable.csv into config.output_dir.
void write_compare_outputs(const SweepConfig& config, const CompareResult& result);

}  // namespace dynmap
