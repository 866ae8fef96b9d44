#include "dynmap/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "dynmap/errors.hpp"
#include "dynmap/quadrature.hpp"

namespace dynmap {

EmbeddingRun embedding_propagate(const EmbeddingSpec& spec, double dt, std::size_t steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("embedding time step must be positive");
    const Embedding emb = build_embedding(spec);
    const Matrix step = expm(emb.generator, dt).matrix();

    std::vector<Superoperator> maps;
    maps.reserve(steps);
    Matrix extended = emb.embed;
    for (std::size_t n = 0; n < steps; ++n) {
        extended = step * extended;
        maps.emplace_back(emb.trace_out * extended);
    }
    Eigen::ComplexEigenSolver<Matrix> eig(emb.generator.matrix(), false);
    return {DynamicalMapSeries(dt, 0.0, std::move(maps)), eig.eigenvalues()};
}

Superoperator embedding_map_at(const Embedding& emb, double t) {
    const Matrix prop = expm(emb.generator, t).matrix();
    return Superoperator(emb.trace_out * prop * emb.embed);
}

// ---------------------------------------------------------------------------

std::complex<double> InfluenceCoefficients::at(std::size_t k) const {
    if (k < eta.size()) return eta[k];
    const std::size_t i = k - eta.size();
    return i < tail.size() ? tail[i] : std::complex<double>{};
}

namespace {

// 2 sin^2(x/2) = 1 - cos x without cancellation
double one_minus_cos(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

// x - sin x, series below 0.1
double x_minus_sin(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    }
    return x - std::sin(x);
}

// Oscillation periods over [0, w_max] beyond which eta_k switches to the time-domain route.
constexpr double kMaxSpectralPeriods = 1.0e4;

class EtaCalculator {
public:
    EtaCalculator(const SpectralDensity& sd, double temperature, double dt)
        : sd_(sd), temperature_(temperature), dt_(dt), correlation_(sd, temperature) {
        // J coth bounds the integrands via 4 sin^2(w dt/2)/w^2 <= min(dt^2, 4/w^2) and
        // (w dt - sin w dt)/w^2 <= dt/w, so this envelope sets a safe upper frequency.
        auto envelope = [&](double w) {
            return sd_(w) * thermal_factor(w, temperature_) * std::min(dt_ * dt_, dt_ / w);
        };
        wmax_ = sd_.kind() == SpectralKind::custom_table ? sd_.upper_cutoff()
                                                         : envelope_cutoff(envelope, 1e-12);
        scale_ = std::min(wmax_, 1.0 / dt_);
    }

    bool spectral_route(std::size_t k) const {
        return k <= 2 || wmax_ * static_cast<double>(k + 1) * dt_ / (2.0 * std::numbers::pi) <= kMaxSpectralPeriods;
    }

    std::complex<double> eta0() const {
        if (wmax_ <= 0.0) return {};
        const auto bp = quad::panel_breakpoints(wmax_, scale_, 2.0 * std::numbers::pi / dt_);
        auto f = [&](double w) -> std::complex<double> {
            if (w <= 0.0) return {};
            const double x = w * dt_;
            const double j = sd_(w) / (w * w);
            return {j * thermal_factor(w, temperature_) * one_minus_cos(x), -j * x_minus_sin(x)};
        };
        return quad::adaptive(f, bp, 0.0, 1e-10).value;
    }

    std::complex<double> eta_spectral(std::size_t k, double abs_tol) const {
        if (wmax_ <= 0.0) return {};
        const double tk = static_cast<double>(k) * dt_;
        const auto bp = quad::panel_breakpoints(wmax_, std::min(scale_, 1.0 / (tk + dt_)),
                                                std::numbers::pi / (tk + dt_));
        auto f = [&](double w) -> std::complex<double> {
            if (w <= 0.0) return {};
            const double kernel = 2.0 * sd_(w) * one_minus_cos(w * dt_) / (w * w);
            return {kernel * thermal_factor(w, temperature_) * std::cos(w * tk), -kernel * std::sin(w * tk)};
        };
        return quad::adaptive(f, bp, abs_tol, 1e-9).value;
    }

    // eta_k = dt^2 sum_i w_i [(1 - y_i) C((k + y_i) dt) + y_i C((k - 1 + y_i) dt)] with
    // Gauss-Legendre nodes y_i on [0, 1]; `half[m][i]` caches C((m + y_i) dt).
    std::complex<double> eta_time_domain(std::size_t k, std::vector<std::vector<std::complex<double>>>& half) {
        auto window = [&](std::size_t m) -> const std::vector<std::complex<double>>& {
            if (half.size() <= m) half.resize(m + 1);
            auto& row = half[m];
            if (row.empty()) {
                row.resize(nodes().size());
                for (std::size_t i = 0; i < nodes().size(); ++i) {
                    row[i] = correlation_((static_cast<double>(m) + nodes()[i]) * dt_);
                }
            }
            return row;
        };
        const auto& right = window(k);
        const auto& left = window(k - 1);
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < nodes().size(); ++i) {
            const double y = nodes()[i];
            sum += weights()[i] * ((1.0 - y) * right[i] + y * left[i]);
        }
        return dt_ * dt_ * sum;
    }

private:
    struct Rule {
        std::vector<double> x;
        std::vector<double> w;
    };
    static const Rule& rule() {
        static const Rule r = [] {
            using G = boost::math::quadrature::gauss<double, 7>;
            Rule out;
            // abscissae are stored for the non-negative half of [-1, 1]
            for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
                const double a = G::abscissa()[i];
                const double w = 0.5 * G::weights()[i];
                out.x.push_back(0.5 * (1.0 - a));
                out.w.push_back(w);
                if (a != 0.0) {
                    out.x.push_back(0.5 * (1.0 + a));
                    out.w.push_back(w);
                }
            }
            return out;
        }();
        return r;
    }
    static const std::vector<double>& nodes() { return rule().x; }
    static const std::vector<double>& weights() { return rule().w; }

    const SpectralDensity& sd_;
    double temperature_;
    double dt_;
    BathCorrelation correlation_;
    double wmax_ = 0.0;
    double scale_ = 0.0;
};

}  // namespace

InfluenceCoefficients eta_coefficients(const SpectralDensity& sd, double temperature, double dt,
                                       std::size_t kmax, std::size_t horizon_steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (kmax == 0) throw std::invalid_argument("memory length kmax must be at least 1");
    EtaCalculator calc(sd, temperature, dt);
    std::vector<std::vector<std::complex<double>>> half;

    InfluenceCoefficients out;
    out.dt = dt;
    out.kmax = kmax;
    const std::size_t last = std::max(kmax, horizon_steps);
    out.eta.reserve(kmax + 1);
    out.eta.push_back(calc.eta0());
    const double abs_tol = 1e-12 * std::max(1.0, std::abs(out.eta[0]));
    for (std::size_t k = 1; k <= last; ++k) {
        const auto value = calc.spectral_route(k) ? calc.eta_spectral(k, abs_tol) : calc.eta_time_domain(k, half);
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw QuadratureFailure("influence coefficient eta_" + std::to_string(k) + " is not finite", 0.0);
        }
        (k <= kmax ? out.eta : out.tail).push_back(value);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Path-integral engine working in the eigenbasis of the coupling operator. Path
// points are Liouville indices j = a + D b carrying the forward/backward
// eigenvalues (o_a, o_b). The augmented tensor has the current state index as its
// fastest dimension followed by the retained path points, most recent first.
class QuapiEngine {
public:
    QuapiEngine(const SystemSpec& system, const InfluenceCoefficients& coeffs, const QuapiOptions& options)
        : coeffs_(coeffs) {
        system.validate();
        if (coeffs.eta.size() != coeffs.kmax + 1) {
            throw std::invalid_argument("influence coefficients must hold eta_0..eta_kmax");
        }
        d_ = system.dim();
        l_ = d_ * d_;
        const double entries = std::pow(static_cast<double>(l_), static_cast<double>(coeffs.kmax + 1));
        if (entries > options.memory_budget_entries) {
            throw MemoryBudgetExceeded("augmented tensor needs " + std::to_string(entries) +
                                       " entries, above the configured budget");
        }

        Eigen::SelfAdjointEigenSolver<Matrix> eig(system.coupling);
        if (eig.info() != Eigen::Success) {
            throw NonDiagonalizableCoupling("coupling operator could not be diagonalized");
        }
        basis_ = eig.eigenvectors();
        const Eigen::VectorXd o = eig.eigenvalues();
        splus_.resize(l_);
        sminus_.resize(l_);
        for (Index b = 0; b < d_; ++b) {
            for (Index a = 0; a < d_; ++a) {
                splus_[a + d_ * b] = o(a);
                sminus_[a + d_ * b] = o(b);
            }
        }

        const Matrix h = basis_.adjoint() * system.hamiltonian * basis_;
        half_step_ = expm(Generator(commutator_superop(h)), 0.5 * coeffs.dt).matrix();

        switch (options.tail_folding) {
            case TailFolding::on: fold_ = true; break;
            case TailFolding::off: fold_ = false; break;
            case TailFolding::automatic: {
                const Matrix comm = system.hamiltonian * system.coupling - system.coupling * system.hamiltonian;
                fold_ = comm.norm() <= 1e-12 * std::max(1.0, system.hamiltonian.norm() * system.coupling.norm());
                break;
            }
        }

        self_.resize(l_);
        for (Index j = 0; j < l_; ++j) self_[j] = pair_factor(coeffs.eta[0], j, j);
        pair_.resize(coeffs.kmax + 1);
        for (std::size_t k = 1; k <= coeffs.kmax; ++k) pair_[k] = pair_matrix(coeffs.eta[k]);
    }

    std::vector<Matrix> run(const Matrix& initial, std::size_t steps) const {
        if (initial.rows() != d_ || initial.cols() != d_) {
            throw DimensionMismatch("initial state dimension does not match the system");
        }
        const std::size_t kmax = coeffs_.kmax;
        std::vector<Matrix> out;
        out.reserve(steps + 1);
        out.push_back(initial);

        // running sum of eta_k for k >= kmax, the folded coefficient at the oldest point
        std::complex<double> folded = coeffs_.eta[kmax];
        Matrix folded_pair = pair_[kmax];

        const Matrix rho0 = basis_.adjoint() * initial * basis_;
        Vector tensor = vectorize(rho0);
        std::size_t history = 0;
        for (std::size_t n = 1; n <= steps; ++n) {
            if (fold_ && history == kmax && n - 1 > kmax) {
                folded += coeffs_.at(n - 1);
                folded_pair = pair_matrix(folded);
            }
            const Index cols = static_cast<Index>(tensor.size()) / l_;
            Eigen::Map<const Matrix> current(tensor.data(), l_, cols);
            Matrix weighted = half_step_ * current;  // rows: new path point j
            apply_influence(weighted, history, history == kmax ? folded_pair : pair_[history]);

            Matrix reduced;
            std::size_t next_history = history + 1;
            if (history == kmax) {
                // the oldest point leaves the memory window
                const Index block = cols / l_;
                reduced = Matrix::Zero(l_, block);
                for (Index x = 0; x < l_; ++x) reduced += weighted.middleCols(x * block, block);
                next_history = kmax;
            } else {
                reduced = std::move(weighted);
            }

            // R'(i, j, H) = K(i, j) T(j, H): the new point becomes the most recent history entry
            const Index rest = reduced.cols();
            Vector next(l_ * l_ * rest);
            Eigen::Map<Matrix> next_m(next.data(), l_, l_ * rest);
            for (Index h = 0; h < rest; ++h) {
                for (Index j = 0; j < l_; ++j) {
                    next_m.col(j + l_ * h) = half_step_.col(j) * reduced(j, h);
                }
            }
            tensor = std::move(next);
            history = next_history;

            Eigen::Map<const Matrix> state(tensor.data(), l_, static_cast<Index>(tensor.size()) / l_);
            const Vector rho = state.rowwise().sum();
            out.push_back(basis_ * devectorize(rho) * basis_.adjoint());
        }
        return out;
    }

    Index dim() const noexcept { return d_; }

private:
    std::complex<double> pair_factor(std::complex<double> eta, Index j, Index jp) const {
        const double diff = splus_[j] - sminus_[j];
        return std::exp(-diff * (eta * splus_[jp] - std::conj(eta) * sminus_[jp]));
    }

    Matrix pair_matrix(std::complex<double> eta) const {
        Matrix m(l_, l_);
        for (Index jp = 0; jp < l_; ++jp) {
            for (Index j = 0; j < l_; ++j) m(j, jp) = pair_factor(eta, j, jp);
        }
        return m;
    }

    // Multiplies T(j; H) by I_0(j) prod_k I_k(j, H_k); the distance-`history` factor
    // uses `oldest` (the folded coefficient once the window is full).
    void apply_influence(Matrix& t, std::size_t history, const Matrix& oldest) const {
        const Index cols = t.cols();
        std::vector<Index> digits(history, 0);
        for (Index c = 0; c < cols; ++c) {
            for (Index j = 0; j < l_; ++j) {
                std::complex<double> f = self_[j];
                for (std::size_t k = 1; k <= history; ++k) {
                    const Matrix& p = (k == history) ? oldest : pair_[k];
                    f *= p(j, digits[k - 1]);
                }
                t(j, c) *= f;
            }
            for (std::size_t k = 0; k < history; ++k) {
                if (++digits[k] < l_) break;
                digits[k] = 0;
            }
        }
    }

    const InfluenceCoefficients& coeffs_;
    bool fold_ = false;
    Index d_ = 0;
    Index l_ = 0;
    Matrix basis_;
    std::vector<double> splus_;
    std::vector<double> sminus_;
    Matrix half_step_;
    std::vector<std::complex<double>> self_;
    std::vector<Matrix> pair_;
};

}  // namespace

std::vector<Matrix> quapi_trajectory(const SystemSpec& system, const InfluenceCoefficients& coeffs,
                                     const Matrix& initial, std::size_t steps, const QuapiOptions& options) {
    const QuapiEngine engine(system, coeffs, options);
    return engine.run(initial, steps);
}

DynamicalMapSeries quapi_propagate(const SystemSpec& system, const InfluenceCoefficients& coeffs,
                                   std::size_t steps, const QuapiOptions& options) {
    if (steps == 0) throw std::invalid_argument("quapi_propagate needs at least one step");
    const QuapiEngine engine(system, coeffs, options);
    const Index d = engine.dim();
    const auto basis = matrix_unit_basis(d);
    std::vector<std::vector<Matrix>> runs;
    runs.reserve(basis.size());
    for (const auto& e : basis) runs.push_back(engine.run(e, steps));

    std::vector<Superoperator> maps;
    maps.reserve(steps);
    for (std::size_t n = 1; n <= steps; ++n) {
        Matrix m(d * d, d * d);
        for (Index b = 0; b < d * d; ++b) m.col(b) = vectorize(runs[static_cast<std::size_t>(b)][n]);
        maps.emplace_back(std::move(m));
    }
    return DynamicalMapSeries(coeffs.dt, 0.0, std::move(maps));
}

}  // namespace dynmap
