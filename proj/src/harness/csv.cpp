#include "dicke/harness/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dicke::harness {

std::string format_g12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string record_row(const StepRecord& r) {
    std::string row = format_g12(r.t);
    for (double v : {r.lam, r.energy_per_unit, r.ergotropy1, r.variance1, r.entropy1, r.etot_ratio}) {
        row += ',';
        row += format_g12(v);
    }
    return row;
}

std::vector<double> split_row(const std::string& line, std::size_t expected,
                              const std::string& context) {
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(std::stod(cell));
    if (fields.size() != expected)
        throw std::runtime_error(context + ": expected " + std::to_string(expected) +
                                 " fields, got " + std::to_string(fields.size()));
    return fields;
}

StepRecord record_from(const std::vector<double>& f, std::size_t offset) {
    StepRecord r;
    r.t = f[offset + 0];
    r.lam = f[offset + 1];
    r.energy_per_unit = f[offset + 2];
    r.ergotropy1 = f[offset + 3];
    r.variance1 = f[offset + 4];
    r.entropy1 = f[offset + 5];
    r.etot_ratio = f[offset + 6];
    return r;
}

}  // namespace

void write_records_csv(const std::filesystem::path& path, const std::vector<StepRecord>& records) {
    std::string out = std::string(kRecordHeader) + "\n";
    for (const auto& r : records) out += record_row(r) + "\n";
    write_text_atomic(path, out);
}

std::vector<StepRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kRecordHeader)
        throw std::runtime_error(path.string() + ": unexpected header");
    std::vector<StepRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from(split_row(line, 7, path.string()), 0));
    }
    return records;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table) {
    std::string out = std::string("n,gtau,") + kRecordHeader + "\n";
    for (const auto& row : table)
        out += std::to_string(row.n_tls) + "," + format_g12(row.gtau) + "," + record_row(row.rec) + "\n";
    write_text_atomic(path, out);
}

SweepTable read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != std::string("n,gtau,") + kRecordHeader)
        throw std::runtime_error(path.string() + ": unexpected header");
    SweepTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_row(line, 9, path.string());
        SweepRow row;
        row.n_tls = static_cast<int>(f[0]);
        row.gtau = f[1];
        row.rec = record_from(f, 2);
        table.push_back(row);
    }
    return table;
}

}  // namespace dicke::harness
