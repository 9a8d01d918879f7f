// csv.hpp — Figure-data tables: fixed schemas, atomic writes, 12 significant digits

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dicke/observables.hpp"

namespace dicke::harness {

std::string format_g12(double x);

// Atomic (temp + rename) text file write.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

inline constexpr const char* kRecordHeader =
    "t,lambda,energy_per_unit,ergotropy1,variance1,entropy1,etot_ratio";

// One file per (N, τ, protocol-kind): the schema above, one row per grid point.
void write_records_csv(const std::filesystem::path& path, const std::vector<StepRecord>& records);
std::vector<StepRecord> read_records_csv(const std::filesystem::path& path);

/// Final-state record of one (N, g̃τ) point of a sweep.
struct SweepRow {
    int n_tls = 0;
    double gtau = 0.0;
    StepRecord rec;
};
using SweepTable = std::vector<SweepRow>;

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table);
SweepTable read_sweep_csv(const std::filesystem::path& path);

}  // namespace dicke::harness
