#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slfv/errors.hpp"
#include "slfv/forward.hpp"

namespace slfv {

/// Doubles are printed with %.17g everywhere so that identical runs produce
/// identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    row += '\n';
    return row;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) {
        out_.open(path, std::ios::binary);
        if (!out_) throw input_error("CsvWriter: cannot open " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) { out_ << csv_row(values); }

    void raw_row(const std::string& line) { out_ << line << '\n'; }

  private:
    std::ofstream out_;
};

/// Field snapshot: one line of JSON header (d, L, h, t, seed, cells) followed
/// by the cell values as little-endian float64, row-major.
inline void write_snapshot(const std::filesystem::path& path, const GridField& w, double t,
                           std::uint64_t seed) {
    nlohmann::json header;
    header["d"] = w.domain.dimension;
    header["L"] = w.domain.side_length;
    header["h"] = w.h;
    header["t"] = t;
    header["seed"] = seed;
    header["cells_per_side"] = w.cells_per_side;
    header["count"] = w.data.size();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("write_snapshot: cannot open " + path.string());
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(w.data.data()),
              static_cast<std::streamsize>(w.data.size() * sizeof(double)));
}

struct Snapshot {
    GridField field;
    double t = 0.0;
    std::uint64_t seed = 0;
};

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("read_snapshot: cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    const auto header = nlohmann::json::parse(line);
    Snapshot snap;
    snap.t = header.at("t").get<double>();
    snap.seed = header.at("seed").get<std::uint64_t>();
    const TorusDomain dom(header.at("d").get<int>(), header.at("L").get<double>());
    snap.field = GridField(dom, header.at("h").get<double>());
    const auto count = header.at("count").get<std::size_t>();
    if (count != snap.field.data.size()) throw input_error("read_snapshot: cell count mismatch");
    in.read(reinterpret_cast<char*>(snap.field.data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw input_error("read_snapshot: truncated payload");
    return snap;
}

/// JSONL trajectory record for the dual.
inline std::string dual_record(double t, std::size_t n, std::uint64_t branches,
                               std::uint64_t coalescences, const std::vector<Point>* positions,
                               int dimension) {
    nlohmann::json j;
    j["t"] = t;
    j["N"] = n;
    j["branches"] = branches;
    j["coalescences"] = coalescences;
    if (positions != nullptr) {
        auto arr = nlohmann::json::array();
        for (const auto& p : *positions) {
            auto pt = nlohmann::json::array();
            for (int i = 0; i < dimension; ++i) pt.push_back(p[i]);
            arr.push_back(pt);
        }
        j["positions"] = arr;
    }
    return j.dump();
}

} // namespace slfv
