#include "dynmap/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dynmap/quadrature.hpp"

namespace dynmap {

SpectralDensity SpectralDensity::subohmic(double alpha, double s, double omega_c) {
    if (!(omega_c > 0.0) || !(s > 0.0)) throw std::invalid_argument("sub-ohmic density needs s > 0, omega_c > 0");
    SpectralDensity sd;
    sd.kind_ = SpectralKind::subohmic;
    sd.params_ = {alpha, s, omega_c};
    return sd;
}

SpectralDensity SpectralDensity::drude_lorentz(double lambda, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("Drude-Lorentz density needs gamma > 0");
    SpectralDensity sd;
    sd.kind_ = SpectralKind::drude_lorentz;
    sd.params_ = {lambda, gamma};
    return sd;
}

SpectralDensity SpectralDensity::qd_phonon(double c_e, double c_h, double omega_e, double omega_h) {
    if (!(omega_e > 0.0) || !(omega_h > 0.0)) throw std::invalid_argument("phonon density needs positive cutoffs");
    SpectralDensity sd;
    sd.kind_ = SpectralKind::qd_phonon;
    sd.params_ = {c_e, c_h, omega_e, omega_h};
    return sd;
}

SpectralDensity SpectralDensity::custom_table(std::vector<double> omega, std::vector<double> values) {
    if (omega.size() != values.size()) throw std::invalid_argument("spectral table columns differ in length");
    for (std::size_t i = 1; i < omega.size(); ++i) {
        if (!(omega[i] > omega[i - 1])) throw std::invalid_argument("spectral table frequencies must increase");
    }
    if (!omega.empty() && omega.front() < 0.0) throw NegativeFrequency("spectral table has negative frequencies");
    SpectralDensity sd;
    sd.kind_ = SpectralKind::custom_table;
    sd.table_omega_ = std::move(omega);
    sd.table_values_ = std::move(values);
    return sd;
}

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0) throw NegativeFrequency("spectral density evaluated at negative frequency");
    return evaluate(omega);
}

double SpectralDensity::evaluate(double w) const {
    switch (kind_) {
        case SpectralKind::subohmic: {
            const double alpha = params_[0], s = params_[1], wc = params_[2];
            if (w == 0.0) return 0.0;
            return 2.0 * alpha * std::pow(w, s) * std::pow(wc, 1.0 - s) * std::exp(-w / wc);
        }
        case SpectralKind::drude_lorentz: {
            const double lambda = params_[0], gamma = params_[1];
            return 2.0 * lambda * gamma * w / (w * w + gamma * gamma);
        }
        case SpectralKind::qd_phonon: {
            const double ce = params_[0], ch = params_[1], we = params_[2], wh = params_[3];
            return w * w * w * (ce * std::exp(-w * w / (we * we)) - ch * std::exp(-w * w / (wh * wh)));
        }
        case SpectralKind::custom_table: {
            const auto& x = table_omega_;
            if (x.empty() || w < x.front() || w > x.back()) return 0.0;
            const auto it = std::upper_bound(x.begin(), x.end(), w);
            if (it == x.end()) return table_values_.back();
            const auto i = static_cast<std::size_t>(it - x.begin());
            if (i == 0) return table_values_.front();
            const double f = (w - x[i - 1]) / (x[i] - x[i - 1]);
            return (1.0 - f) * table_values_[i - 1] + f * table_values_[i];
        }
    }
    return 0.0;
}

double SpectralDensity::peak() const {
    if (kind_ == SpectralKind::custom_table) {
        double m = 0.0;
        for (double v : table_values_) m = std::max(m, v);
        return m;
    }
    double m = 0.0;
    for (int i = 0; i <= 22 * 50; ++i) {
        const double w = std::pow(10.0, -8.0 + i / 50.0);
        m = std::max(m, evaluate(w));
    }
    return m;
}

double envelope_cutoff(const std::function<double(double)>& envelope, double rel, double lo, double hi) {
    constexpr int per_decade = 50;
    const int points = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
    std::vector<double> w(static_cast<std::size_t>(points) + 1), v(w.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = lo * std::pow(10.0, static_cast<double>(i) / per_decade);
        v[i] = std::abs(envelope(w[i]));
        vmax = std::max(vmax, v[i]);
    }
    if (vmax == 0.0) return 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (v[i] >= rel * vmax) last = i;
    }
    return 2.0 * w[std::min(last + 1, w.size() - 1)];
}

double SpectralDensity::upper_cutoff(double rel) const {
    if (kind_ == SpectralKind::custom_table) {
        return table_omega_.empty() ? 0.0 : table_omega_.back();
    }
    return envelope_cutoff([this](double w) { return evaluate(w); }, rel);
}

double spectral_density_eval(const SpectralDensity& sd, double omega) { return sd(omega); }

SpectralDensity load_spectral_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spectral table " + path);
    std::vector<double> w, j;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) {
            if (w.empty()) continue;  // header
            throw ConfigError("malformed spectral table line: " + line);
        }
        w.push_back(a);
        j.push_back(b);
    }
    return SpectralDensity::custom_table(std::move(w), std::move(j));
}

double thermal_factor(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;
    return 1.0 / std::tanh(omega / (2.0 * temperature));
}

namespace {

// Oscillation periods across [0, w_max] up to which the finite-range adaptive rule is used.
constexpr double kMaxDirectPeriods = 4000.0;

}  // namespace

BathCorrelation::BathCorrelation(const SpectralDensity& sd, double temperature)
    : sd_(sd), temperature_(temperature), wmax_(sd.upper_cutoff()), peak_(sd.peak()) {
    if (peak_ == 0.0) wmax_ = 0.0;
}

std::complex<double> BathCorrelation::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("bath correlation needs t >= 0");
    if (!(wmax_ > 0.0)) return {0.0, 0.0};
    constexpr double rel = 1e-8;

    // coth overflows where w/2T underflows; that sliver carries no weight
    auto weighted = [&](double w) {
        if (!(w > 0.0)) return 0.0;
        const double v = sd_(w) * thermal_factor(w, temperature_);
        return std::isfinite(v) ? v : 0.0;
    };
    const double scale = std::min(wmax_, 10.0);
    if (t == 0.0) {
        const auto bp = quad::panel_breakpoints(wmax_, scale, wmax_ / 64.0);
        return quad::adaptive([&](double w) { return std::complex<double>(weighted(w), 0.0); }, bp, 0.0, 1e-10)
            .value;
    }
    if (wmax_ * t <= 2.0 * std::numbers::pi * kMaxDirectPeriods) {
        const auto bp = quad::panel_breakpoints(wmax_, std::min(scale, 1.0 / t), std::numbers::pi / t);
        // absolute floor relative to the J-weighted scale of the integrand
        const double floor = rel * 1e-2 * peak_ / t;
        const auto r = quad::adaptive(
            [&](double w) {
                return std::complex<double>(weighted(w) * std::cos(w * t), -sd_(w) * std::sin(w * t));
            },
            bp, floor, rel);
        return r.value;
    }
    const double re = quad::fourier_cos(weighted, t).value.real();
    const double im = -quad::fourier_sin([&](double w) { return sd_(w); }, t).value.real();
    return {re, im};
}

std::complex<double> bath_correlation(const SpectralDensity& sd, double temperature, double t) {
    return BathCorrelation(sd, temperature)(t);
}

void SystemSpec::validate() const {
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0) {
        throw DimensionMismatch("system Hamiltonian must be square and nonempty");
    }
    if (coupling.rows() != hamiltonian.rows() || coupling.cols() != hamiltonian.cols()) {
        throw DimensionMismatch("coupling operator must match the Hamiltonian dimension");
    }
    if (!is_hermitian(hamiltonian, 1e-12)) throw std::invalid_argument("system Hamiltonian is not Hermitian");
    if (!is_hermitian(coupling, 1e-12)) throw std::invalid_argument("coupling operator is not Hermitian");
    if (temperature < 0.0) throw std::invalid_argument("temperature must be non-negative");
}

Embedding build_embedding(const EmbeddingSpec& spec) {
    spec.system.validate();
    if (spec.n_max < 1) throw std::invalid_argument("Fock truncation n_max must be at least 1");
    const Index d = spec.system.dim();
    const Index levels = spec.n_max + 1;
    const Index dext = d * levels;
    if (dext > kMaxEmbeddingDim) {
        throw TruncationGuard("extended dimension " + std::to_string(dext) + " exceeds " +
                              std::to_string(kMaxEmbeddingDim));
    }

    Matrix b = Matrix::Zero(levels, levels);
    for (Index m = 1; m < levels; ++m) b(m - 1, m) = std::sqrt(static_cast<double>(m));
    const Matrix id_s = Matrix::Identity(d, d);
    const Matrix id_m = Matrix::Identity(levels, levels);

    const Matrix h_ext = kron(spec.system.hamiltonian, id_m) +
                         spec.mode_frequency * kron(id_s, b.adjoint() * b) +
                         spec.coupling * kron(spec.system.coupling, b + b.adjoint());
    Matrix l = commutator_superop(h_ext);
    if (spec.decay != 0.0) l += spec.decay * dissipator_superop(kron(id_s, b));

    Embedding emb;
    emb.generator = Generator(std::move(l));
    emb.system_dim = d;
    emb.mode_levels = levels;
    emb.embed = Matrix::Zero(dext * dext, d * d);
    emb.trace_out = Matrix::Zero(d * d, dext * dext);
    for (Index sp = 0; sp < d; ++sp) {
        for (Index s = 0; s < d; ++s) {
            const Index reduced = s + d * sp;
            emb.embed(s * levels + dext * (sp * levels), reduced) = 1.0;
            for (Index m = 0; m < levels; ++m) {
                emb.trace_out(reduced, (s * levels + m) + dext * (sp * levels + m)) = 1.0;
            }
        }
    }
    return emb;
}

Matrix embedding_number_operator(const Embedding& emb) {
    Matrix n = Matrix::Zero(emb.mode_levels, emb.mode_levels);
    for (Index m = 0; m < emb.mode_levels; ++m) n(m, m) = static_cast<double>(m);
    return kron(Matrix::Identity(emb.system_dim, emb.system_dim), n);
}

PaperModel paper_model(const std::string& name) {
    PaperModel model;
    model.name = name;
    const Matrix sx = pauli::x();
    const Matrix sz = pauli::z();
    if (name == "subohmic_fig1") {
        const double omega = 1.0;
        model.system.hamiltonian = 0.5 * omega * sx;
        model.system.coupling = 0.5 * sz;
        model.system.temperature = 0.0;
        model.density = SpectralDensity::subohmic(0.2, 0.7, 5.0 * omega);
        model.dt = 0.08;
        model.t_ref = 80.0;
    } else if (name == "drude_lorentz_fig2") {
        const double gamma = 1.0;
        const double omega0 = -gamma, omega = gamma;
        model.system.hamiltonian = 0.5 * (omega0 * sz + omega * sx);
        model.system.coupling = 0.5 * sz;
        model.system.temperature = 0.0;
        model.density = SpectralDensity::drude_lorentz(0.1 * gamma, gamma);
        model.dt = 0.05 / gamma;
        model.t_ref = 100.0 / gamma;
    } else if (name == "qd_phonon_fig3") {
        const double omega0 = -1.0, omega = 1.0;  // ps^-1
        model.system.hamiltonian = 0.5 * (omega0 * sz + omega * sx);
        model.system.coupling = 0.5 * sz;
        model.system.temperature = 0.0;
        model.density = SpectralDensity::qd_phonon(0.1271, -0.0635, 2.555, 2.938);
        model.dt = 0.05;
        model.t_ref = 100.0;  // ps
    } else {
        throw UnknownModel("unknown model '" + name + "'");
    }
    return model;
}

}  // namespace dynmap
