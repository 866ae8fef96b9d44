#include "dynmap/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dynmap::io {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double x) {
    const auto v = std::bit_cast<std::uint64_t>(x);
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    out.write(b.data(), 8);
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw Error("truncated map container");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
}

double get_f64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw Error("truncated map container");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return std::bit_cast<double>(v);
}

}  // namespace

void write_container(std::ostream& out, const MapContainer& c) {
    if (c.magic.size() != 4) throw std::invalid_argument("container magic must be 4 bytes");
    const std::uint32_t d = c.maps.empty() ? 0u : static_cast<std::uint32_t>(c.maps.front().dim());
    out.write(c.magic.data(), 4);
    put_u32(out, kContainerVersion);
    put_u32(out, d);
    put_u32(out, static_cast<std::uint32_t>(c.maps.size()));
    put_f64(out, c.dt);
    put_f64(out, c.t0);
    for (const auto& m : c.maps) {
        if (static_cast<std::uint32_t>(m.dim()) != d) throw DimensionMismatch("mixed map dimensions");
        const Matrix& mat = m.matrix();
        for (Index col = 0; col < mat.cols(); ++col) {
            for (Index row = 0; row < mat.rows(); ++row) {
                put_f64(out, mat(row, col).real());
                put_f64(out, mat(row, col).imag());
            }
        }
    }
    if (!out) throw Error("failed writing map container");
}

MapContainer read_container(std::istream& in) {
    MapContainer c;
    c.magic.resize(4);
    if (!in.read(c.magic.data(), 4)) throw Error("truncated map container");
    const std::uint32_t version = get_u32(in);
    if (version != kContainerVersion) {
        throw Error("unsupported map container version " + std::to_string(version));
    }
    const std::uint32_t d = get_u32(in);
    const std::uint32_t n = get_u32(in);
    c.dt = get_f64(in);
    c.t0 = get_f64(in);
    const Index d2 = static_cast<Index>(d) * d;
    c.maps.reserve(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        Matrix mat(d2, d2);
        for (Index col = 0; col < d2; ++col) {
            for (Index row = 0; row < d2; ++row) {
                const double re = get_f64(in);
                const double im = get_f64(in);
                mat(row, col) = Complex(re, im);
            }
        }
        c.maps.emplace_back(std::move(mat));
    }
    return c;
}

void write_container(const std::filesystem::path& path, const MapContainer& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_container(out, c);
}

MapContainer read_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_container(in);
}

void write_dmap(const std::filesystem::path& path, const DynamicalMapSeries& series) {
    write_container(path, MapContainer{std::string(kMagicMaps), series.dt(), series.t0(), series.maps()});
}

DynamicalMapSeries read_dmap(const std::filesystem::path& path) {
    MapContainer c = read_container(path);
    if (c.magic != kMagicMaps) throw Error(path.string() + " is not a DMAP container");
    return DynamicalMapSeries(c.dt, c.t0, std::move(c.maps));
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

void write_maps_csv(std::ostream& out, const std::vector<Superoperator>& maps) {
    CsvWriter w(out, {"n", "row", "col", "re", "im"});
    for (std::size_t n = 0; n < maps.size(); ++n) {
        const Matrix& m = maps[n].matrix();
        for (Index col = 0; col < m.cols(); ++col) {
            for (Index row = 0; row < m.rows(); ++row) {
                w.cell(static_cast<long long>(n + 1))
                    .cell(static_cast<long long>(row))
                    .cell(static_cast<long long>(col))
                    .cell(m(row, col).real())
                    .cell(m(row, col).imag());
                w.end_row();
            }
        }
    }
}

std::vector<Superoperator> read_maps_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    std::map<long long, std::vector<std::tuple<long long, long long, Complex>>> entries;
    long long max_index = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[5];
        for (auto& s : f) {
            if (!std::getline(ss, s, ',')) throw Error("malformed map CSV line: " + line);
        }
        const long long n = std::stoll(f[0]);
        const long long r = std::stoll(f[1]);
        const long long c = std::stoll(f[2]);
        entries[n].emplace_back(r, c, Complex(std::stod(f[3]), std::stod(f[4])));
        max_index = std::max({max_index, r, c});
    }
    std::vector<Superoperator> maps;
    for (auto& [n, list] : entries) {
        Matrix m = Matrix::Zero(max_index + 1, max_index + 1);
        for (const auto& [r, c, v] : list) m(r, c) = v;
        maps.emplace_back(std::move(m));
    }
    return maps;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::sep() {
    if (in_row_++) out_ << ',';
}

CsvWriter& CsvWriter::cell(double x) {
    sep();
    out_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
    sep();
    out_ << x;
    return *this;
}

CsvWriter& CsvWriter::cell(bool x) {
    sep();
    out_ << (x ? "true" : "false");
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    sep();
    out_ << s;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw std::logic_error("CSV row has " + std::to_string(in_row_) + " cells, header has " +
                               std::to_string(columns_));
    }
    out_ << '\n';
    in_row_ = 0;
}

}  // namespace dynmap::io
