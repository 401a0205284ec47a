#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qrp/analysis.hpp"
#include "qrp/observables.hpp"
#include "qrp/quench.hpp"

// Artifact formats. Binary files are little-endian with an 8-byte magic;
// doubles are stored as raw IEEE-754 so values round-trip bit-exactly.
//
//   r2 grid:      "QRPR2G\0\1" u32 n_sites, u32 n_times, f64 threshold,
//                 f64 times[n_times], f64 r2[n_sites*n_times],
//                 f64 delta[n_sites*n_times], u8 zeroed[n_sites*n_times]
//   observables:  "QRPOBS\0\1" u32 n_instances, u32 n_sites, u32 n_times,
//                 u8 axis, u64 seed, u32 n_train, u32 n_test,
//                 f64 inputs[n_instances], f64 times[n_times],
//                 f64 values[n_instances*n_sites*n_times], u32 meta_len, meta
//
// Text tables are CSV with a header row.
namespace qrp::io {

namespace fs = std::filesystem;

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const fs::path& path, std::string_view contents);
std::string read_file(const fs::path& path);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const fs::path& path);

std::string encode_r2_grid(const R2Grid& grid);
R2Grid decode_r2_grid(std::string_view bytes);

struct StoredObservables {
    ObservableGrid grid;
    InputBatch batch;
};
std::string encode_observables(const ObservableGrid& grid, const InputBatch& batch);
StoredObservables decode_observables(std::string_view bytes);

// Long form, one row per (site, time):
//   site_offset,time,r2,delta,masked
// with site_offset measured from the central site and reals printed to nine
// significant digits.
std::string heatmap_csv(const R2Grid& grid);
std::string entropy_csv(const EntropySeries& series);
// <parameter>,r2_mean,dip  (r2_mean printed round-trip exact; dip = 1 on the
// argmin row)
std::string sweep_csv(const SweepResult& sweep, const Dip& dip);

} // namespace qrp::io
