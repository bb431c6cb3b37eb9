#pragma once

/// @file io.hpp
/// On-disk formats: field snapshots (16-byte header + row-major f64),
/// the diagnostics series CSV, and small filesystem helpers.
///
/// Snapshot layout, little-endian:
///   bytes 0..3   magic "ARCS"
///   bytes 4..5   format version (u16, currently 1)
///   bytes 6..7   dim (u16, 1 or 2)
///   bytes 8..11  cells_x (u32)
///   bytes 12..15 cells_y (u32, 1 when dim == 1)
///   then cells_x * cells_y doubles, x varying fastest.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "arcs/diagnostics.hpp"
#include "arcs/errors.hpp"
#include "arcs/grid.hpp"

namespace arcs {

static_assert(std::endian::native == std::endian::little,
              "snapshot i/o assumes a little-endian host");

struct SnapshotInfo {
    int dim = 0;
    std::uint32_t cells_x = 0;
    std::uint32_t cells_y = 0;
};

inline void write_snapshot(const std::string& path, const Grid& grid,
                           const Field& field) {
    if (field.size() != static_cast<std::size_t>(grid.total_cells()))
        throw ValidationError("snapshot field size does not match grid");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open snapshot for writing: " + path);
    const char magic[4] = {'A', 'R', 'C', 'S'};
    const std::uint16_t version = 1;
    const std::uint16_t dim = static_cast<std::uint16_t>(grid.dim());
    const std::uint32_t nx = static_cast<std::uint32_t>(grid.cells(0));
    const std::uint32_t ny = static_cast<std::uint32_t>(grid.dim() == 2 ? grid.cells(1) : 1);
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 2);
    out.write(reinterpret_cast<const char*>(&dim), 2);
    out.write(reinterpret_cast<const char*>(&nx), 4);
    out.write(reinterpret_cast<const char*>(&ny), 4);
    out.write(reinterpret_cast<const char*>(field.data()),
              static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!out) throw ParseError("short write on snapshot: " + path);
}

inline Field read_snapshot(const std::string& path, SnapshotInfo& info) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open snapshot: " + path);
    char magic[4];
    std::uint16_t version = 0, dim = 0;
    std::uint32_t nx = 0, ny = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 2);
    in.read(reinterpret_cast<char*>(&dim), 2);
    in.read(reinterpret_cast<char*>(&nx), 4);
    in.read(reinterpret_cast<char*>(&ny), 4);
    if (!in || std::memcmp(magic, "ARCS", 4) != 0)
        throw ParseError("not a field snapshot: " + path);
    if (version != 1)
        throw ParseError("unsupported snapshot version " + std::to_string(version));
    if ((dim != 1 && dim != 2) || nx == 0 || ny == 0 || (dim == 1 && ny != 1))
        throw ParseError("corrupt snapshot header: " + path);
    info.dim = dim;
    info.cells_x = nx;
    info.cells_y = ny;
    Field data(static_cast<std::size_t>(nx) * ny);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double)))
        throw ParseError("truncated snapshot: " + path);
    return data;
}

inline const char* series_header() {
    return "t,mass_u,linf_u,linf_v,linf_w,min_v,min_w,grad_linf_v,grad_linf_w,"
           "energy_p,f_min,f_max,Q_max,excluded_cells,blowup";
}

/// Streaming CSV writer for the diagnostics series. Values are written
/// with 17 significant digits so a read-back reproduces them exactly.
class SeriesWriter {
  public:
    explicit SeriesWriter(const std::string& path) : out_(path) {
        if (!out_) throw ParseError("cannot open series file: " + path);
        out_ << series_header() << "\n";
    }

    void append(const DiagnosticsRecord& r) {
        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g,%.17g,%ld,%d",
                      r.t, r.mass_u, r.linf_u, r.linf_v, r.linf_w, r.min_v,
                      r.min_w, r.grad_linf_v, r.grad_linf_w, r.energy_p,
                      r.f_min, r.f_max, r.Q_max, r.excluded_cells,
                      r.blowup ? 1 : 0);
        out_ << buf << "\n";
        out_.flush();
    }

  private:
    std::ofstream out_;
};

inline std::vector<DiagnosticsRecord> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty series file: " + path);
    if (line != series_header())
        throw ParseError("unexpected series header in " + path);
    std::vector<DiagnosticsRecord> records;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        DiagnosticsRecord r;
        long blowup = 0;
        const int got = std::sscanf(
            line.c_str(),
            "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%ld,%ld",
            &r.t, &r.mass_u, &r.linf_u, &r.linf_v, &r.linf_w, &r.min_v,
            &r.min_w, &r.grad_linf_v, &r.grad_linf_w, &r.energy_p, &r.f_min,
            &r.f_max, &r.Q_max, &r.excluded_cells, &blowup);
        if (got != 15)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": malformed series row");
        r.blowup = blowup != 0;
        records.push_back(r);
    }
    return records;
}

inline void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ParseError("cannot create directory " + path + ": " + ec.message());
}

} // namespace arcs
