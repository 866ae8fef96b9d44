#include <doctest.h>

#include <cmath>

#include "dynmap/errors.hpp"
#include "dynmap/propagators.hpp"
#include "random_models.hpp"

using namespace dynmap;
using namespace dynmap::testing;

namespace {

// Independent-boson decoherence exponent for the T = 0 sub-ohmic bath with coupling sz / 2:
// Gamma(t) = int J(w) (1 - cos wt) / w^2 dw in closed form.
double subohmic_gamma(double alpha, double s, double wc, double t) {
    const double a = 1.0 / wc;
    const Complex tail = std::pow(Complex(a, t), 1.0 - s);
    return 2.0 * alpha * std::pow(wc, 1.0 - s) * std::tgamma(s - 1.0) * (std::pow(a, 1.0 - s) - tail.real());
}

// eta_0 at T = 0 by composite Simpson on a uniform grid plus the leading analytic tail.
Complex eta0_simpson(const SpectralDensity& sd, double dt, double wmax, double tail_coeff) {
    const std::size_t n = 2'000'000;
    const double h = wmax / n;
    auto f = [&](double w) -> Complex {
        if (w == 0.0) return 0.0;
        const double x = w * dt;
        const double s = std::sin(0.5 * x);
        return sd(w) / (w * w) * Complex(2.0 * s * s, -(x - std::sin(x)));
    };
    Complex sum = f(0.0) + f(wmax);
    for (std::size_t i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
    // J ~ tail_coeff / w at large w: real part ~ tail_coeff / w^2 on average, imag ~ -tail_coeff dt / w^2
    return sum * h / 3.0 + Complex(tail_coeff / (wmax * wmax), -tail_coeff * dt / wmax);
}

SystemSpec spin(const Matrix& h, const Matrix& o) { return SystemSpec{h, o, 0.0}; }

}  // namespace

TEST_SUITE("propagators") {

TEST_CASE("Drude-Lorentz eta_0 against direct quadrature") {
    const double lambda = 0.1, gamma = 1.0, dt = 0.05;
    const auto dl = SpectralDensity::drude_lorentz(lambda, gamma);
    const auto coeffs = eta_coefficients(dl, 0.0, dt, 1);
    const Complex ref = eta0_simpson(dl, dt, 4.0e4, 2.0 * lambda * gamma);
    CHECK(std::abs(coeffs.eta[0] - ref) <= 1e-6 * std::abs(ref));
}

TEST_CASE("eta sums reproduce the decoherence exponent") {
    const double alpha = 0.2, s = 0.7, wc = 5.0, dt = 0.02;
    const std::size_t n = 40;
    const auto coeffs = eta_coefficients(SpectralDensity::subohmic(alpha, s, wc), 0.0, dt, n);
    double sum = n * coeffs.eta[0].real();
    for (std::size_t k = 1; k < n; ++k) sum += (n - k) * coeffs.eta[k].real();
    CHECK(sum == doctest::Approx(subohmic_gamma(alpha, s, wc, n * dt)).epsilon(1e-8));
}

TEST_CASE("sub-ohmic coefficients decay with distance") {
    const auto coeffs = eta_coefficients(SpectralDensity::subohmic(0.2, 0.7, 5.0), 0.0, 0.08, 5, 200);
    CHECK(coeffs.tail.size() == 195);
    const double slope = std::log(std::abs(coeffs.at(200)) / std::abs(coeffs.at(20))) / std::log(10.0);
    CHECK(slope < 0.0);
    CHECK(coeffs.at(1000) == Complex(0.0));
}

TEST_CASE("pure dephasing matches the independent-boson solution") {
    const double alpha = 0.2, s = 0.7, wc = 5.0, dt = 0.02;
    const std::size_t steps = 250;
    const auto coeffs = eta_coefficients(SpectralDensity::subohmic(alpha, s, wc), 0.0, dt, 3, steps);
    const Matrix rho0 = Matrix::Constant(2, 2, 0.5);
    const auto traj = quapi_trajectory(spin(Matrix::Zero(2, 2), 0.5 * pauli::z()), coeffs, rho0, steps);
    double worst = 0.0;
    for (std::size_t n = 1; n <= steps; ++n) {
        const double exact = 0.5 * std::exp(-subohmic_gamma(alpha, s, wc, n * dt));
        worst = std::max(worst, std::abs(std::abs(traj[n](0, 1)) - exact) / exact);
        CHECK(std::abs(traj[n](0, 0) - 0.5) < 1e-12);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("zero coupling reduces to unitary dynamics") {
    const Matrix h = 0.5 * pauli::x() + 0.2 * pauli::z();
    const auto coeffs = eta_coefficients(SpectralDensity::subohmic(0.2, 0.7, 5.0), 0.0, 0.1, 3);
    const auto maps = quapi_propagate(spin(h, Matrix::Zero(2, 2)), coeffs, 20);
    const Generator gen(commutator_superop(h));
    for (std::size_t n = 1; n <= 20; ++n) {
        CHECK(frobenius_diff(maps.at(n), expm(gen, 0.1 * n)) < 1e-10);
    }
}

TEST_CASE("maps from QUAPI are trace preserving") {
    const auto coeffs = eta_coefficients(SpectralDensity::drude_lorentz(0.1, 1.0), 0.0, 0.05, 3);
    const auto maps = quapi_propagate(spin(0.5 * pauli::x(), 0.5 * pauli::z()), coeffs, 30);
    for (const auto& m : maps.maps()) CHECK(trace_preservation_defect(m) < 1e-12);
}

TEST_CASE("memory hierarchy converges with kmax") {
    for (const char* name : {"subohmic_fig1", "drude_lorentz_fig2", "qd_phonon_fig3"}) {
        const PaperModel model = paper_model(name);
        const std::size_t steps = 20, top = 5;
        const auto full = eta_coefficients(model.density, model.system.temperature, model.dt, top, steps);
        std::vector<Superoperator> finals;
        for (std::size_t k = 1; k <= top; ++k) {
            InfluenceCoefficients c;
            c.dt = full.dt;
            c.kmax = k;
            for (std::size_t i = 0; i <= steps; ++i) (i <= k ? c.eta : c.tail).push_back(full.at(i));
            finals.push_back(quapi_propagate(model.system, c, steps).at(steps));
        }
        INFO(name);
        for (std::size_t i = 2; i < finals.size(); ++i) {
            const double prev = frobenius_diff(finals[i - 2], finals[i - 1]);
            const double next = frobenius_diff(finals[i - 1], finals[i]);
            CHECK(next <= prev + 1e-10);
        }
    }
}

TEST_CASE("memory budget guard") {
    const auto coeffs = eta_coefficients(SpectralDensity::drude_lorentz(0.1, 1.0), 0.0, 0.05, 4);
    QuapiOptions opt;
    opt.memory_budget_entries = 100.0;
    CHECK_THROWS_AS(quapi_propagate(spin(pauli::x(), 0.5 * pauli::z()), coeffs, 5, opt), MemoryBudgetExceeded);
}

TEST_CASE("embedding maps agree with direct exponentiation") {
    EmbeddingSpec spec;
    spec.system = spin(0.5 * pauli::x(), 0.5 * pauli::z());
    spec.mode_frequency = 1.0;
    spec.coupling = 0.4;
    spec.decay = 0.5;
    spec.n_max = 6;
    const auto run = embedding_propagate(spec, 0.1, 100);
    const Embedding emb = build_embedding(spec);
    for (std::size_t n : {1u, 37u, 100u}) {
        CHECK(frobenius_diff(run.maps.at(n), embedding_map_at(emb, 0.1 * n)) < 1e-10);
    }
    // the extended generator has a zero mode and otherwise decays
    double top = -1e300;
    int zeros = 0;
    for (Index i = 0; i < run.spectrum.size(); ++i) {
        if (std::abs(run.spectrum(i)) < 1e-9) ++zeros;
        else top = std::max(top, run.spectrum(i).real());
    }
    CHECK(zeros >= 1);
    CHECK(top < 0.0);
}

TEST_CASE("decoupled embedding is unitary on the system") {
    EmbeddingSpec spec;
    spec.system = spin(0.5 * pauli::x(), 0.5 * pauli::z());
    spec.coupling = 0.0;
    spec.decay = 0.5;
    spec.n_max = 2;
    const auto run = embedding_propagate(spec, 0.2, 10);
    const Generator gen(commutator_superop(spec.system.hamiltonian));
    CHECK(frobenius_diff(run.maps.at(10), expm(gen, 2.0)) < 1e-12);
}

TEST_CASE("both propagators preserve Hermiticity") {
    const Matrix rho = 0.5 * (pauli::identity() + 0.3 * pauli::x() - 0.4 * pauli::y());
    const auto coeffs = eta_coefficients(SpectralDensity::drude_lorentz(0.1, 1.0), 0.0, 0.05, 3);
    const auto traj = quapi_trajectory(spin(0.5 * pauli::x(), 0.5 * pauli::z()), coeffs, rho, 40);
    for (const Matrix& r : traj) CHECK(is_hermitian(r, 1e-10));

    EmbeddingSpec spec;
    spec.system = spin(0.5 * pauli::x(), 0.5 * pauli::z());
    spec.coupling = 0.4;
    spec.decay = 0.5;
    spec.n_max = 4;
    const auto run = embedding_propagate(spec, 0.1, 40);
    for (const auto& m : run.maps.maps()) CHECK(is_hermitian(devectorize(m.apply(vectorize(rho))), 1e-10));
}

TEST_CASE("embedding maps are not divisible but the extended space composes") {
    EmbeddingSpec spec;
    spec.system = spin(0.5 * pauli::x(), 0.5 * pauli::z());
    spec.coupling = 0.4;
    spec.decay = 0.5;
    spec.n_max = 6;
    const auto run = embedding_propagate(spec, 0.1, 40);
    CHECK(frobenius_diff(run.maps.at(40), run.maps.at(20) * run.maps.at(20)) > 1e-4);
    const Embedding emb = build_embedding(spec);
    const Matrix ext20 = expm(emb.generator, 2.0).matrix();
    const Matrix composed = emb.trace_out * ext20 * ext20 * emb.embed;
    CHECK((composed - run.maps.at(40).matrix()).norm() < 1e-10);
}

}
