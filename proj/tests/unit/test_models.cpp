#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dynmap/errors.hpp"
#include "dynmap/maps.hpp"
#include "dynmap/models.hpp"

using namespace dynmap;

namespace {

// T = 0 sub-ohmic correlation function in closed form.
Complex subohmic_correlation(double alpha, double s, double wc, double t) {
    return 2.0 * alpha * std::pow(wc, 1.0 - s) * std::tgamma(s + 1.0) * std::pow(Complex(1.0 / wc, t), -(s + 1.0));
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("spectral density formulas") {
    const auto so = SpectralDensity::subohmic(0.2, 0.7, 5.0);
    CHECK(so(1.3) == doctest::Approx(2 * 0.2 * std::pow(1.3, 0.7) * std::pow(5.0, 0.3) * std::exp(-1.3 / 5.0)));
    CHECK(so(0.0) == 0.0);
    const auto dl = SpectralDensity::drude_lorentz(0.1, 2.0);
    CHECK(dl(1.5) == doctest::Approx(2 * 0.1 * 2.0 * 1.5 / (1.5 * 1.5 + 4.0)));
    const auto qd = SpectralDensity::qd_phonon(0.1271, -0.0635, 2.555, 2.938);
    const double w = 1.7;
    CHECK(qd(w) == doctest::Approx(w * w * w * (0.1271 * std::exp(-w * w / (2.555 * 2.555)) +
                                                 0.0635 * std::exp(-w * w / (2.938 * 2.938)))));
    CHECK(spectral_density_eval(dl, 1.5) == dl(1.5));
    CHECK_THROWS_AS(dl(-1.0), NegativeFrequency);
    CHECK(dl.kind() == SpectralKind::drude_lorentz);
}

TEST_CASE("peak and upper cutoff") {
    const auto dl = SpectralDensity::drude_lorentz(0.1, 2.0);
    CHECK(dl.peak() == doctest::Approx(0.1).epsilon(1e-6));
    const auto so = SpectralDensity::subohmic(0.2, 0.7, 5.0);
    const double wc = so.upper_cutoff(1e-12);
    CHECK(so(wc / 2.0) < 1.01e-12 * so.peak());
}

TEST_CASE("tabulated density interpolates linearly") {
    const auto tab = SpectralDensity::custom_table({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
    CHECK(tab(0.5) == doctest::Approx(1.0));
    CHECK(tab(2.0) == doctest::Approx(1.0));
    CHECK(tab(5.0) == 0.0);

    const auto path = std::filesystem::temp_directory_path() / "dynmap_table_test.csv";
    {
        std::ofstream out(path);
        out << "omega,J\n0,0\n1,2\n3,0\n";
    }
    CHECK(load_spectral_table(path.string())(0.5) == doctest::Approx(1.0));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(SpectralDensity::custom_table({1.0, 0.5}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("thermal factor") {
    CHECK(thermal_factor(1.0, 0.0) == 1.0);
    CHECK(thermal_factor(1.0, 0.5) == doctest::Approx(1.0 / std::tanh(1.0)));
    CHECK(thermal_factor(1e-6, 1.0) == doctest::Approx(2e6).epsilon(1e-6));
}

TEST_CASE("sub-ohmic correlation function against its closed form") {
    const double alpha = 0.2, s = 0.7, wc = 5.0;
    const BathCorrelation corr(SpectralDensity::subohmic(alpha, s, wc), 0.0);
    for (double t : {0.0, 0.05, 0.3, 1.0, 4.0, 20.0}) {
        const Complex exact = subohmic_correlation(alpha, s, wc, t);
        CHECK(std::abs(corr(t) - exact) <= 1e-7 * std::abs(exact));
    }
}

TEST_CASE("Drude-Lorentz correlation at finite temperature against the Matsubara series") {
    const double lambda = 0.1, gamma = 1.0, temperature = 1.0, beta = 1.0 / temperature;
    const auto dl = SpectralDensity::drude_lorentz(lambda, gamma);
    const BathCorrelation corr(dl, temperature);
    const double pi = std::acos(-1.0);
    for (double t : {0.5, 1.0, 3.0}) {
        Complex exact = lambda * gamma * Complex(1.0 / std::tan(beta * gamma / 2.0), -1.0) * std::exp(-gamma * t);
        for (int k = 1; k < 200; ++k) {
            const double nu = 2.0 * pi * k / beta;
            exact += 4.0 * lambda * gamma / beta * nu / (nu * nu - gamma * gamma) * std::exp(-nu * t);
        }
        exact *= pi;
        CHECK(std::abs(corr(t) - exact) <= 1e-6 * std::abs(exact));
    }
    CHECK(std::abs(bath_correlation(dl, temperature, 0.5) - corr(0.5)) < 1e-14);
}

TEST_CASE("imaginary part of the correlation does not depend on temperature") {
    const auto dl = SpectralDensity::drude_lorentz(0.1, 1.0);
    const BathCorrelation cold(dl, 0.0), warm(dl, 1.0);
    for (double t : {0.2, 1.0, 5.0}) {
        CHECK(std::abs(cold(t).imag() - warm(t).imag()) <= 1e-8 * std::abs(cold(t).imag()));
    }
}

TEST_CASE("embedding construction") {
    EmbeddingSpec spec;
    spec.system.hamiltonian = 0.5 * pauli::x();
    spec.system.coupling = 0.5 * pauli::z();
    spec.mode_frequency = 1.0;
    spec.coupling = 0.4;
    spec.decay = 0.5;
    spec.n_max = 3;
    const Embedding emb = build_embedding(spec);
    CHECK(emb.system_dim == 2);
    CHECK(emb.mode_levels == 4);
    CHECK(emb.generator.dim() == 8);
    CHECK((emb.trace_out * emb.embed).isIdentity(1e-14));
    // trace preservation of the extended generator
    const Vector id = Eigen::Map<const Vector>(Matrix(Matrix::Identity(8, 8)).data(), 64);
    CHECK((id.adjoint() * emb.generator.matrix()).norm() < 1e-12);
    const Matrix n = embedding_number_operator(emb);
    CHECK(n.trace().real() == doctest::Approx(2 * (0 + 1 + 2 + 3)));

    spec.n_max = 40;
    CHECK_THROWS_AS(build_embedding(spec), TruncationGuard);
}

TEST_CASE("damped mode settles at the driven-cavity fixed point") {
    EmbeddingSpec spec;
    spec.system.hamiltonian = Matrix::Zero(2, 2);
    spec.system.coupling = 0.5 * pauli::z();
    spec.mode_frequency = 1.0;
    spec.coupling = 0.4;
    spec.decay = 0.5;
    spec.n_max = 6;
    const Embedding emb = build_embedding(spec);
    Matrix up = Matrix::Zero(2, 2);
    up(0, 0) = 1.0;
    const Vector v0 = emb.embed * Eigen::Map<const Vector>(up.data(), 4);
    const Vector v = expm(emb.generator, 200.0).apply(v0);
    const Matrix rho = Eigen::Map<const Matrix>(v.data(), 14, 14);
    const double n = (embedding_number_operator(emb) * rho).trace().real();
    // coherent state with amplitude -i g o / (i W + kappa / 2), o = 1/2
    const double expected = 0.4 * 0.4 * 0.25 / (1.0 + 0.25 * 0.25);
    CHECK(n == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("paper models") {
    for (const char* name : {"subohmic_fig1", "drude_lorentz_fig2", "qd_phonon_fig3"}) {
        const PaperModel m = paper_model(name);
        CHECK(m.dt > 0.0);
        CHECK(m.t_ref > 0.0);
        CHECK_NOTHROW(m.system.validate());
    }
    CHECK_THROWS_AS(paper_model("nope"), UnknownModel);
}

TEST_CASE("system validation") {
    SystemSpec sys{pauli::x(), pauli::z(), 0.0};
    CHECK_NOTHROW(sys.validate());
    sys.hamiltonian(0, 1) = 2.0;
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
    sys = SystemSpec{pauli::x(), Matrix::Identity(3, 3), 0.0};
    CHECK_THROWS_AS(sys.validate(), DimensionMismatch);
}

}
