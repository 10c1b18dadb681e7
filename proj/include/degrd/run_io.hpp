#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "degrd/grid.hpp"
#include "degrd/solver.hpp"
#include "degrd/trace.hpp"

namespace degrd {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "degrd 1.0.0";

// CSV: "# format_version: 1", one "# channel: name | definition | reference" line per
// channel, a header row "t,<channels>", then one row per sample. NaN is an empty cell.
void write_traces_csv(const TraceSeries& series, const std::filesystem::path& path);
TraceSeries read_traces_csv(const std::filesystem::path& path);

// Long format "t,channel,value" with NaN rows dropped.
void write_long_csv(const TraceSeries& series, const std::filesystem::path& path);

// Binary snapshot: magic "DRDSNAP1", u32 version, u32 dim, u32 resolution, u64 cells,
// f64 t, then cells doubles of a followed by cells doubles of b (little endian).
struct SnapshotHeader {
    std::uint32_t version = 1;
    std::uint32_t dim = 1;
    std::uint32_t resolution = 0;
    std::uint64_t cells = 0;
    double t = 0;
};
void write_snapshot(const std::filesystem::path& path, const Grid& grid, const StatePair& s);
// Checks the header against the grid; throws std::runtime_error on mismatch or truncation.
StatePair read_snapshot(const std::filesystem::path& path, const GridPtr& grid, SnapshotHeader* header = nullptr);

// Snapshot file name for sample index i.
std::string snapshot_name(std::size_t i);

}  // namespace degrd
