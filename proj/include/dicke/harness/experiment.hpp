// experiment.hpp — Orchestration: baselines, RL runs with best-of selection,
// convergence evaluation, and comparison tables

#pragma once

#include <cstdint>
#include <vector>

#include "dicke/harness/config.hpp"
#include "dicke/harness/csv.hpp"
#include "dicke/protocol.hpp"
#include "dicke/sac/trainer.hpp"

namespace dicke::harness {

/// Rollout of one protocol with per-grid-point records.
struct Curve {
    int n_tls = 0;
    double gtau = 0.0;
    Protocol protocol;
    std::vector<StepRecord> records;  // records.size() == protocol.size() + 1

    const StepRecord& final_record() const { return records.back(); }
};

// Records of `protocol` from the initial state at cutoff n_fock = multiplier·N.
// Row i carries the control active at t_i (0 on the final row). When
// convergence_diag is non-null it receives |𝓔₁(τ; mult·N) − 𝓔₁(τ; base cutoff)|.
std::vector<StepRecord> evaluate_protocol(const Protocol& protocol, const ModelParams& params,
                                          int fock_multiplier,
                                          double* convergence_diag = nullptr);

// On-off baseline over every (n, g̃τ) of the config, evaluated at the eval
// cutoff. Writes one trajectory CSV per point plus a sweep CSV per n.
struct OnoffSweepResult {
    std::vector<Curve> curves;
    SweepTable sweep;
};
OnoffSweepResult run_onoff_sweep(const ExperimentConfig& config, bool write_files = true);

struct RepetitionResult {
    int rep = 0;
    std::uint64_t seed = 0;
    Protocol protocol;                   // deterministic mean-action rollout
    double ergotropy_train_cutoff = 0.0; // final 𝓔₁ at the training cutoff
    double ergotropy_eval_cutoff = 0.0;  // final 𝓔₁ at the eval cutoff (selection key)
    std::vector<sac::EpisodeLog> log;
};

struct RunResult {
    int n_tls = 0;
    double gtau = 0.0;
    std::vector<RepetitionResult> repetitions;
    int best_index = 0;
    std::vector<StepRecord> best_records;  // best protocol at the eval cutoff
    double convergence_diag = 0.0;

    const RepetitionResult& best() const { return repetitions[static_cast<std::size_t>(best_index)]; }
};

// Trains n_repetitions agents (seeds base..base+reps−1, parallel across
// threads), evaluates each deterministic protocol at the eval cutoff and keeps
// the best. One result per g̃τ in the config.
std::vector<RunResult> run_rl_experiments(const ExperimentConfig& config, bool write_files = true);

struct CompareRow {
    int n_tls = 0;
    double gtau = 0.0;
    double delta_ergotropy1 = 0.0;  // rl − on-off
    double variance_ratio = 0.0;    // rl / on-off (1 when both vanish)
    double entropy1_onoff = 0.0, entropy1_rl = 0.0;
    double etot_ratio_onoff = 0.0, etot_ratio_rl = 0.0;
};

// Per-(n, g̃τ) comparison; the two tables must cover identical grids
// (GridMismatch otherwise).
std::vector<CompareRow> compare_report(const SweepTable& onoff, const SweepTable& rl);

void write_compare_csv(const std::filesystem::path& path, const std::vector<CompareRow>& rows);

// Training log CSV (one row per episode).
void write_train_log_csv(const std::filesystem::path& path,
                         const std::vector<sac::EpisodeLog>& log);

}  // namespace dicke::harness
