#include <doctest.h>

#include <random>

#include "dynmap/ttm.hpp"
#include "random_models.hpp"

using namespace dynmap;
using namespace dynmap::testing;

namespace {

DynamicalMapSeries random_series(std::mt19937_64& rng, std::size_t n) {
    std::vector<Superoperator> maps;
    Superoperator acc = Superoperator::identity(2);
    for (std::size_t i = 0; i < n; ++i) {
        acc = random_tp_map(rng, 2, 0.2) * acc;
        maps.push_back(acc);
    }
    return DynamicalMapSeries(0.1, 0.0, maps);
}

}  // namespace

TEST_SUITE("ttm") {

TEST_CASE("decompose matches the recursion written out by hand") {
    std::mt19937_64 rng(11);
    const auto series = random_series(rng, 4);
    const auto t = decompose(series);
    const Matrix e1 = series.at(1).matrix(), e2 = series.at(2).matrix(), e3 = series.at(3).matrix();
    const Matrix t1 = e1;
    const Matrix t2 = e2 - t1 * e1;
    const Matrix t3 = e3 - t2 * e1 - t1 * e2;
    CHECK(rel_frobenius(t.tensors[0].matrix(), t1) < 1e-13);
    CHECK(rel_frobenius(t.tensors[1].matrix(), t2) < 1e-13);
    CHECK(rel_frobenius(t.tensors[2].matrix(), t3) < 1e-13);
    CHECK(t.norms[1] == doctest::Approx(t2.norm()));
}

TEST_CASE("resum inverts decompose") {
    std::mt19937_64 rng(12);
    const auto series = random_series(rng, 30);
    const auto back = resum(decompose(series));
    for (std::size_t n = 1; n <= series.size(); ++n) {
        CHECK(rel_frobenius(back.at(n).matrix(), series.at(n).matrix()) < 1e-12);
    }
}

TEST_CASE("a semigroup has a single transfer tensor") {
    std::mt19937_64 rng(13);
    const Generator gen = random_lindblad(rng, 2);
    std::vector<Superoperator> maps;
    for (int n = 1; n <= 10; ++n) maps.push_back(expm(gen, 0.1 * n));
    const auto t = decompose(DynamicalMapSeries(0.1, 0.0, maps));
    for (std::size_t n = 1; n < t.size(); ++n) CHECK(t.norms[n] < 1e-12);
}

TEST_CASE("extrapolation with full memory reproduces the data") {
    std::mt19937_64 rng(14);
    const auto series = random_series(rng, 12);
    const auto t = decompose(series);
    const Matrix rho0 = 0.5 * (pauli::identity() + pauli::x());
    const auto states = extrapolate(t, rho0, 12, 12);
    REQUIRE(states.size() == 13);
    CHECK(states[0] == rho0);
    for (std::size_t n = 1; n <= 12; ++n) {
        const Matrix expected = devectorize(series.at(n).apply(vectorize(rho0)));
        CHECK((states[n] - expected).norm() < 1e-12);
    }
}

TEST_CASE("extrapolation rejects a cutoff beyond the data") {
    std::mt19937_64 rng(15);
    const auto t = decompose(random_series(rng, 3));
    CHECK_THROWS_AS(extrapolate(t, pauli::identity() * 0.5, 4, 10), CutoffExceedsData);
}

TEST_CASE("tensor norm profile is on the time grid") {
    std::mt19937_64 rng(16);
    const auto t = decompose(random_series(rng, 5));
    const auto profile = tensor_norm_profile(t);
    REQUIRE(profile.size() == 5);
    CHECK(profile[2].t == doctest::Approx(0.3));
    CHECK(profile[2].value == doctest::Approx(t.norms[2]));
}

}
