#include "degrd/run_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace degrd {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'D', 'R', 'D', 'S', 'N', 'A', 'P', '1'};

std::string cell(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_traces_csv(const TraceSeries& series, const std::filesystem::path& path) {
    series.check();
    auto out = open_out(path);
    out << "# format_version: " << kFormatVersion << '\n';
    for (const auto& c : series.channels) out << "# channel: " << c.name << " | " << c.definition << " | " << c.reference << '\n';
    out << 't';
    for (const auto& c : series.channels) out << ',' << c.name;
    out << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << cell(series.times[i]);
        for (const auto& c : series.channels) out << ',' << cell(c.values[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

TraceSeries read_traces_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    TraceSeries s;
    std::string line;
    int version = 0;
    std::vector<std::string> columns;
    struct Meta {
        std::string definition, reference;
    };
    std::vector<std::pair<std::string, Meta>> meta;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            if (body.rfind("format_version:", 0) == 0) {
                version = std::stoi(body.substr(15));
            } else if (body.rfind("channel:", 0) == 0) {
                auto parts = split(body.substr(8), '|');
                Meta m;
                if (parts.size() > 1) m.definition = trim(parts[1]);
                if (parts.size() > 2) m.reference = trim(parts[2]);
                meta.emplace_back(parts.empty() ? "" : trim(parts[0]), m);
            }
            continue;
        }
        auto cells = split(line, ',');
        if (columns.empty()) {
            columns = cells;
            if (columns.empty() || trim(columns[0]) != "t")
                throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": header must start with t");
            for (std::size_t c = 1; c < columns.size(); ++c) {
                const std::string name = trim(columns[c]);
                Meta m;
                for (const auto& [n, mm] : meta)
                    if (n == name) m = mm;
                s.add_channel(name, m.definition, m.reference);
            }
            continue;
        }
        if (cells.size() != columns.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(columns.size()) + " cells");
        auto parse = [&](const std::string& v) {
            const std::string t = trim(v);
            if (t.empty()) return std::nan("");
            try {
                std::size_t used = 0;
                double x = std::stod(t, &used);
                if (used == t.size()) return x;
            } catch (const std::exception&) {
            }
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number '" + t + "'");
        };
        s.times.push_back(parse(cells[0]));
        for (std::size_t c = 1; c < cells.size(); ++c) s.channels[c - 1].values.push_back(parse(cells[c]));
    }
    if (version != kFormatVersion)
        throw std::runtime_error(path.string() + ": unsupported format_version " + std::to_string(version));
    s.check();
    return s;
}

void write_long_csv(const TraceSeries& series, const std::filesystem::path& path) {
    series.check();
    auto out = open_out(path);
    out << "# format_version: " << kFormatVersion << '\n' << "t,channel,value\n";
    for (const auto& c : series.channels)
        for (std::size_t i = 0; i < series.size(); ++i)
            if (!std::isnan(c.values[i])) out << cell(series.times[i]) << ',' << c.name << ',' << cell(c.values[i]) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string snapshot_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06zu.bin", i);
    return buf;
}

void write_snapshot(const std::filesystem::path& path, const Grid& grid, const StatePair& s) {
    auto out = open_out(path, true);
    const std::uint32_t version = 1, dim = grid.dim(), res = grid.resolution;
    const std::uint64_t cells = grid.size();
    if (s.a.size() != cells || s.b.size() != cells) throw std::invalid_argument("snapshot fields do not match the grid");
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&res), sizeof res);
    out.write(reinterpret_cast<const char*>(&cells), sizeof cells);
    out.write(reinterpret_cast<const char*>(&s.t), sizeof s.t);
    out.write(reinterpret_cast<const char*>(s.a.values.data()), static_cast<std::streamsize>(cells * sizeof(double)));
    out.write(reinterpret_cast<const char*>(s.b.values.data()), static_cast<std::streamsize>(cells * sizeof(double)));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

StatePair read_snapshot(const std::filesystem::path& path, const GridPtr& grid, SnapshotHeader* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char magic[8];
    SnapshotHeader h;
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw std::runtime_error(path.string() + ": not a snapshot file");
    in.read(reinterpret_cast<char*>(&h.version), sizeof h.version);
    in.read(reinterpret_cast<char*>(&h.dim), sizeof h.dim);
    in.read(reinterpret_cast<char*>(&h.resolution), sizeof h.resolution);
    in.read(reinterpret_cast<char*>(&h.cells), sizeof h.cells);
    in.read(reinterpret_cast<char*>(&h.t), sizeof h.t);
    if (!in) throw std::runtime_error(path.string() + ": truncated header");
    if (h.version != 1) throw std::runtime_error(path.string() + ": unsupported snapshot version " + std::to_string(h.version));
    if (h.dim != static_cast<std::uint32_t>(grid->dim()) || h.resolution != static_cast<std::uint32_t>(grid->resolution) ||
        h.cells != grid->size())
        throw std::runtime_error(path.string() + ": snapshot does not match the run grid");
    StatePair s{Field(grid), Field(grid), h.t};
    in.read(reinterpret_cast<char*>(s.a.values.data()), static_cast<std::streamsize>(h.cells * sizeof(double)));
    in.read(reinterpret_cast<char*>(s.b.values.data()), static_cast<std::streamsize>(h.cells * sizeof(double)));
    if (!in) throw std::runtime_error(path.string() + ": truncated data");
    if (header) *header = h;
    return s;
}

}  // namespace degrd
