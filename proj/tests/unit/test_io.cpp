#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dynmap/io.hpp"
#include "random_models.hpp"

using namespace dynmap;
using namespace dynmap::testing;

namespace {

DynamicalMapSeries sample_series() {
    std::mt19937_64 rng(41);
    std::vector<Superoperator> maps;
    for (int i = 0; i < 3; ++i) maps.push_back(random_tp_map(rng, 2));
    return DynamicalMapSeries(0.1, 0.25, maps);
}

bool bit_equal(const Matrix& a, const Matrix& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("DMAP round trip is bit exact") {
    const auto series = sample_series();
    const auto path = std::filesystem::temp_directory_path() / "dynmap_io_test.dmap";
    io::write_dmap(path, series);
    const auto back = io::read_dmap(path);
    std::filesystem::remove(path);
    REQUIRE(back.size() == series.size());
    CHECK(back.dt() == series.dt());
    CHECK(back.t0() == series.t0());
    for (std::size_t n = 1; n <= series.size(); ++n) CHECK(bit_equal(back.at(n).matrix(), series.at(n).matrix()));
}

TEST_CASE("container header layout") {
    const auto series = sample_series();
    std::stringstream buf;
    io::write_container(buf, io::MapContainer{"TTEN", 0.1, 0.0, series.maps()});
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 4) == "TTEN");
    CHECK(bytes.size() == 4 + 3 * 4 + 2 * 8 + 3 * 16 * 16);
    std::uint32_t dim = 0;
    std::memcpy(&dim, bytes.data() + 8, 4);
    CHECK(dim == 2);

    std::stringstream in(bytes);
    const auto c = io::read_container(in);
    CHECK(c.magic == "TTEN");
    CHECK(c.maps.size() == 3);
}

TEST_CASE("malformed containers are rejected") {
    std::stringstream truncated(std::string("DMAP\x01\x00", 6));
    CHECK_THROWS_AS(io::read_container(truncated), Error);

    std::stringstream buf;
    io::write_container(buf, io::MapContainer{"LMAP", 0.1, 0.0, sample_series().maps()});
    std::string bytes = buf.str();
    bytes[4] = 9;
    std::stringstream bad_version(bytes);
    CHECK_THROWS_AS(io::read_container(bad_version), Error);

    const auto path = std::filesystem::temp_directory_path() / "dynmap_io_wrong.lmap";
    io::write_container(path, io::MapContainer{"LMAP", 0.1, 0.0, sample_series().maps()});
    CHECK_THROWS_AS(io::read_dmap(path), Error);
    std::filesystem::remove(path);
}

TEST_CASE("map CSV round trip") {
    const auto series = sample_series();
    std::stringstream buf;
    io::write_maps_csv(buf, series.maps());
    CHECK(buf.str().rfind("n,row,col,re,im\n", 0) == 0);
    const auto back = io::read_maps_csv(buf);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(bit_equal(back[i].matrix(), series.maps()[i].matrix()));
}

TEST_CASE("double formatting round trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
        CHECK(std::stod(io::format_double(x)) == x);
    }
    CHECK(io::format_double(std::nan("")) == "nan");
    CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("CSV writer enforces the column count") {
    std::stringstream out;
    io::CsvWriter w(out, {"a", "b"});
    w.cell(1.5).cell(true);
    w.end_row();
    CHECK(out.str() == "a,b\n1.5,true\n");
    w.cell(1.0);
    CHECK_THROWS(w.end_row());
}

}
