// config.hpp — Experiment configuration: grids, schedules, seeds, output

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/sac/agent.hpp"

namespace dicke::harness {

// Time-step rule of the reference runs: g̃Δt = 0.03 for g̃τ < 0.6 and 0.06 for
// g̃τ ≥ 0.6 (values in units of the effective coupling g̃ = ω₀λ_max).
double caption_gdt_rule(double gtau);

struct ExperimentConfig {
    ModelParams params = ModelParams::standard(4);
    std::vector<int> n_values;         // battery sizes for sweeps; empty → {params.n_tls}
    std::vector<double> gtau_values;   // charging times, in units of 1/g̃
    double explicit_gdt = 0.0;         // g̃Δt override; 0 → caption rule
    sac::SacConfig sac;                // total_steps defaults to the desk-scale 100k
    int n_repetitions = 4;
    int eval_fock_multiplier = 6;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    int n_threads = 0;  // 0 → hardware concurrency

    ExperimentConfig();

    // λ_max, ω₀ and the cutoff multiplier for a sweep entry of n TLS.
    ModelParams params_for(int n_tls, int fock_multiplier) const;

    double gdt_for(double gtau) const;  // g̃Δt actually used
    double dt_for(double gtau) const;   // physical Δt = g̃Δt / g̃
    double tau_for(double gtau) const { return gtau / params.g_tilde(); }
    // Episode steps; throws GridMismatch when gtau is not commensurate.
    int steps_for(double gtau) const;

    void validate() const;

    // JSON file (any subset of keys) + optional dotted overrides "key=value".
    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    void apply_override(const std::string& key, const std::string& value);
};

}  // namespace dicke::harness
