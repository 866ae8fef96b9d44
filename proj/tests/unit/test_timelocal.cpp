#include <doctest.h>

#include <random>

#include "dynmap/errors.hpp"
#include "dynmap/timelocal.hpp"
#include "random_models.hpp"

using namespace dynmap;
using namespace dynmap::testing;

TEST_SUITE("timelocal") {

TEST_CASE("local maps of a semigroup are the one-step propagator") {
    std::mt19937_64 rng(21);
    const Generator gen = random_lindblad(rng, 2);
    std::vector<Superoperator> maps;
    for (int n = 1; n <= 8; ++n) maps.push_back(expm(gen, 0.2 * n));
    const auto local = local_maps(DynamicalMapSeries(0.2, 0.0, maps));
    REQUIRE(local.size() == 8);
    const Matrix step = expm(gen, 0.2).matrix();
    for (const auto& m : local.maps) CHECK(rel_frobenius(m.matrix(), step) < 1e-12);
    for (const auto& p : stationarity_profile(local)) CHECK(p.value < 1e-12);
}

TEST_CASE("local maps compose back to the dynamical maps") {
    std::mt19937_64 rng(22);
    std::vector<Superoperator> maps;
    Superoperator acc = Superoperator::identity(2);
    for (int n = 0; n < 6; ++n) {
        acc = random_tp_map(rng, 2, 0.2) * acc;
        maps.push_back(acc);
    }
    const auto local = local_maps(DynamicalMapSeries(0.1, 0.0, maps));
    Superoperator prod = Superoperator::identity(2);
    for (std::size_t n = 0; n < local.size(); ++n) {
        prod = local.maps[n] * prod;
        CHECK(rel_frobenius(prod.matrix(), maps[n].matrix()) < 1e-11);
    }
}

TEST_CASE("singular maps are flagged and refuse to seed extrapolation") {
    Matrix dephase = Matrix::Identity(4, 4);
    dephase(1, 1) = dephase(2, 2) = 0.0;
    const std::vector<Superoperator> maps(3, Superoperator(dephase));
    const auto local = local_maps(DynamicalMapSeries(0.1, 0.0, maps));
    CHECK_FALSE(local.flags[0].flagged);
    CHECK(local.flags[1].flagged);
    CHECK(local.flags[1].singular_ratio < 1e-8);
    CHECK_THROWS_AS(stationary_map(local, 2), StationaryMapFlagged);
    CHECK_NOTHROW(stationary_map(local, 1));
}

TEST_CASE("averaged stationary map") {
    std::mt19937_64 rng(23);
    std::vector<Superoperator> maps;
    Superoperator acc = Superoperator::identity(2);
    for (int n = 0; n < 5; ++n) {
        acc = random_tp_map(rng, 2, 0.1) * acc;
        maps.push_back(acc);
    }
    const auto local = local_maps(DynamicalMapSeries(0.1, 0.0, maps));
    TimeLocalOptions opt;
    opt.average_last = 2;
    const Matrix expected = 0.5 * (local.maps[3].matrix() + local.maps[2].matrix());
    CHECK(rel_frobenius(stationary_map(local, 4, opt).matrix(), expected) < 1e-14);
    CHECK(rel_frobenius(stationary_map(local, 4).matrix(), local.maps[3].matrix()) < 1e-14);
    CHECK_THROWS(stationary_map(local, 6));
}

TEST_CASE("TL extrapolation repeats the stationary map") {
    std::mt19937_64 rng(24);
    const Generator gen = random_lindblad(rng, 2);
    std::vector<Superoperator> maps;
    for (int n = 1; n <= 5; ++n) maps.push_back(expm(gen, 0.1 * n));
    const auto local = local_maps(DynamicalMapSeries(0.1, 0.0, maps));
    const Matrix rho0 = 0.5 * (pauli::identity() + pauli::z());
    const auto states = extrapolate_tl(local, rho0, 3, 50);
    REQUIRE(states.size() == 51);
    const Matrix exact = devectorize(expm(gen, 5.0).apply(vectorize(rho0)));
    CHECK((states[50] - exact).norm() < 1e-11);
}

TEST_CASE("spectral stability") {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = 1.01;
    CHECK_FALSE(spectral_stability(Superoperator(m)).stable);
    m(3, 3) = 0.5;
    const auto s = spectral_stability(Superoperator(m));
    CHECK(s.stable);
    CHECK(s.max_modulus == doctest::Approx(1.0));
}

TEST_CASE("TL extrapolation is exact up to the cutoff") {
    std::mt19937_64 rng(25);
    std::vector<Superoperator> maps;
    Superoperator acc = Superoperator::identity(2);
    for (int n = 0; n < 10; ++n) {
        acc = random_tp_map(rng, 2, 0.15) * acc;
        maps.push_back(acc);
    }
    const DynamicalMapSeries series(0.1, 0.0, maps);
    const Matrix rho0 = 0.5 * (pauli::identity() + pauli::y());
    const auto states = extrapolate_tl(local_maps(series), rho0, 10, 10);
    for (std::size_t n = 1; n <= 10; ++n) {
        CHECK((states[n] - devectorize(series.at(n).apply(vectorize(rho0)))).norm() < 1e-10);
    }
}

}
