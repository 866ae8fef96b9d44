#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dynmap/maps.hpp"

namespace dynmap::io {

/// Binary layout, all little-endian:
///   magic[4] | version u32 | D u32 | N u32 | dt f64 | t0 f64 |
///   N * D^4 complex entries (re f64, im f64), each map column-major.
inline constexpr std::uint32_t kContainerVersion = 1;
inline constexpr std::string_view kMagicMaps = "DMAP";
inline constexpr std::string_view kMagicTensors = "TTEN";
inline constexpr std::string_view kMagicLocalMaps = "LMAP";

struct MapContainer {
    std::string magic;
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<Superoperator> maps;
};

void write_container(std::ostream& out, const MapContainer& c);
MapContainer read_container(std::istream& in);

void write_container(const std::filesystem::path& path, const MapContainer& c);
MapContainer read_container(const std::filesystem::path& path);

void write_dmap(const std::filesystem::path& path, const DynamicalMapSeries& series);
/// Reads a "DMAP" container; any other magic is rejected.
DynamicalMapSeries read_dmap(const std::filesystem::path& path);

/// Lossless CSV with columns n,row,col,re,im (n is 1-based).
void write_maps_csv(std::ostream& out, const std::vector<Superoperator>& maps);
std::vector<Superoperator> read_maps_csv(std::istream& in);

/// Shortest round-trippable text for a double ("nan", "inf" for non-finite).
std::string format_double(double x);

/// Simple CSV table writer with a fixed header.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);
    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(bool x);
    CsvWriter& cell(const std::string& s);
    void end_row();

private:
    void sep();
    std::ostream& out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

}  // namespace dynmap::io
