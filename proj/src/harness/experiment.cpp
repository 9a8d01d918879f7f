#include "dicke/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dicke/dynamics.hpp"
#include "dicke/rl_env.hpp"

namespace dicke::harness {

namespace {

std::string gtau_tag(double gtau) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", gtau);
    return buf;
}

std::vector<StepRecord> rollout_records(const DickeOperators& ops, const Propagator& prop,
                                        const Protocol& protocol) {
    const Trajectory traj = rollout(prop, initial_state(ops.params, ops.layout), protocol);
    std::vector<StepRecord> records;
    records.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double lam = i < traj.controls.size() ? traj.controls[i] : 0.0;
        records.push_back(record(ops, traj.states[i], lam, protocol.dt * static_cast<double>(i)));
    }
    return records;
}

int worker_count(const ExperimentConfig& config, int jobs) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int requested = config.n_threads > 0 ? config.n_threads : std::max(hw, 1);
    return std::max(1, std::min(requested, jobs));
}

}  // namespace

std::vector<StepRecord> evaluate_protocol(const Protocol& protocol, const ModelParams& params,
                                          int fock_multiplier, double* convergence_diag) {
    protocol.validate();
    ModelParams eval_params = params;
    eval_params.n_fock = fock_multiplier * params.n_tls;
    eval_params.validate();

    const auto ops = std::make_shared<const DickeOperators>(build_operators(eval_params));
    const Propagator prop(ops, protocol.dt);
    std::vector<StepRecord> records = rollout_records(*ops, prop, protocol);

    if (convergence_diag) {
        const auto base_ops = std::make_shared<const DickeOperators>(build_operators(params));
        const Propagator base_prop(base_ops, protocol.dt);
        const Trajectory base_traj =
            rollout(base_prop, initial_state(params, base_ops->layout), protocol);
        const double base_erg = ergotropy_1(params, base_traj.states.back());
        *convergence_diag = std::abs(records.back().ergotropy1 - base_erg);
    }
    return records;
}

OnoffSweepResult run_onoff_sweep(const ExperimentConfig& config, bool write_files) {
    config.validate();
    std::vector<int> n_values = config.n_values;
    if (n_values.empty()) n_values = {config.params.n_tls};

    OnoffSweepResult result;
    for (int n : n_values) {
        const ModelParams eval_params = config.params_for(n, config.eval_fock_multiplier);
        const auto ops = std::make_shared<const DickeOperators>(build_operators(eval_params));

        // One propagator per distinct dt; its spectral cache is shared by every
        // on-off rollout of that grid (all segments sit at λ_max).
        std::map<double, std::unique_ptr<Propagator>> props;
        SweepTable sweep;
        for (double gtau : config.gtau_values) {
            const double dt = config.dt_for(gtau);
            auto& prop = props[dt];
            if (!prop) prop = std::make_unique<Propagator>(ops, dt);

            Curve curve;
            curve.n_tls = n;
            curve.gtau = gtau;
            curve.protocol =
                on_off(config.tau_for(gtau), dt, config.params.lambda_max, config.params.omega0);
            curve.records = rollout_records(*ops, *prop, curve.protocol);
            sweep.push_back(SweepRow{n, gtau, curve.final_record()});

            if (write_files)
                write_records_csv(config.out_dir / ("onoff_N" + std::to_string(n) + "_gtau" +
                                                    gtau_tag(gtau) + ".csv"),
                                  curve.records);
            result.curves.push_back(std::move(curve));
        }
        if (write_files)
            write_sweep_csv(config.out_dir / ("onoff_sweep_N" + std::to_string(n) + ".csv"), sweep);
        result.sweep.insert(result.sweep.end(), sweep.begin(), sweep.end());
    }
    return result;
}

namespace {

RepetitionResult run_one_repetition(const ExperimentConfig& config, double gtau, int rep) {
    const ModelParams train_params = config.params;
    const double dt = config.dt_for(gtau);
    const int steps = config.steps_for(gtau);

    RepetitionResult out;
    out.rep = rep;
    out.seed = config.seed + static_cast<std::uint64_t>(rep);

    std::uint64_t global_step = 0;
    EnvConfig env_cfg;
    env_cfg.params = train_params;
    env_cfg.dt = dt;
    env_cfg.n_steps = steps;
    env_cfg.c_mean = config.sac.c_mean;
    env_cfg.c_width = config.sac.c_width;
    env_cfg.global_step = &global_step;

    DickeEnv env(env_cfg);
    sac::Trainer<sac::Real> trainer(env, config.sac, out.seed, &global_step);
    trainer.run();
    out.log = trainer.log();

    // Deterministic evaluation episode on a fresh env instance.
    EnvConfig eval_cfg = env_cfg;
    eval_cfg.global_step = nullptr;
    DickeEnv eval_env(eval_cfg);
    out.protocol = from_policy(trainer.agent().policy(), eval_env);

    const std::vector<StepRecord> records =
        evaluate_protocol(out.protocol, train_params, config.eval_fock_multiplier, nullptr);
    out.ergotropy_eval_cutoff = records.back().ergotropy1;
    {
        // final ergotropy at the training cutoff, for the convergence report
        const auto ops = std::make_shared<const DickeOperators>(build_operators(train_params));
        const Propagator prop(ops, out.protocol.dt);
        const Trajectory traj = rollout(prop, initial_state(train_params, ops->layout), out.protocol);
        out.ergotropy_train_cutoff = ergotropy_1(train_params, traj.states.back());
    }
    return out;
}

}  // namespace

std::vector<RunResult> run_rl_experiments(const ExperimentConfig& config, bool write_files) {
    config.validate();
    std::vector<RunResult> results;
    SweepTable rl_sweep;

    for (double gtau : config.gtau_values) {
        RunResult run;
        run.n_tls = config.params.n_tls;
        run.gtau = gtau;
        run.repetitions.resize(static_cast<std::size_t>(config.n_repetitions));

        // Repetitions are independent (seed = base + rep); spread them over
        // worker threads and surface the first failure with its index.
        std::vector<std::exception_ptr> failures(run.repetitions.size());
        std::mutex next_mutex;
        int next_rep = 0;
        const int workers = worker_count(config, config.n_repetitions);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    int rep;
                    {
                        std::lock_guard<std::mutex> lock(next_mutex);
                        if (next_rep >= config.n_repetitions) return;
                        rep = next_rep++;
                    }
                    try {
                        run.repetitions[static_cast<std::size_t>(rep)] =
                            run_one_repetition(config, gtau, rep);
                    } catch (...) {
                        failures[static_cast<std::size_t>(rep)] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (std::size_t rep = 0; rep < failures.size(); ++rep) {
            if (!failures[rep]) continue;
            try {
                std::rethrow_exception(failures[rep]);
            } catch (const std::exception& e) {
                throw std::runtime_error("repetition " + std::to_string(rep) + " failed: " + e.what());
            }
        }

        run.best_index = 0;
        for (int rep = 1; rep < config.n_repetitions; ++rep)
            if (run.repetitions[static_cast<std::size_t>(rep)].ergotropy_eval_cutoff >
                run.best().ergotropy_eval_cutoff)
                run.best_index = rep;
        run.best_records = evaluate_protocol(run.best().protocol, config.params,
                                             config.eval_fock_multiplier, &run.convergence_diag);
        rl_sweep.push_back(SweepRow{run.n_tls, gtau, run.best_records.back()});

        if (write_files) {
            const std::string base =
                "rl_N" + std::to_string(run.n_tls) + "_gtau" + gtau_tag(gtau);
            save(run.best().protocol, config.out_dir / (base + "_protocol.json"));
            write_records_csv(config.out_dir / (base + ".csv"), run.best_records);
            std::string reps = "rep,seed,ergotropy_train_cutoff,ergotropy_eval_cutoff,best\n";
            for (const auto& r : run.repetitions) {
                reps += std::to_string(r.rep) + "," + std::to_string(r.seed) + "," +
                        format_g12(r.ergotropy_train_cutoff) + "," +
                        format_g12(r.ergotropy_eval_cutoff) + "," +
                        (r.rep == run.best_index ? "1" : "0") + "\n";
            }
            write_text_atomic(config.out_dir / (base + "_reps.csv"), reps);
            for (const auto& r : run.repetitions)
                write_train_log_csv(
                    config.out_dir / (base + "_rep" + std::to_string(r.rep) + "_log.csv"), r.log);
        }
        results.push_back(std::move(run));
    }

    if (write_files)
        write_sweep_csv(config.out_dir /
                            ("rl_sweep_N" + std::to_string(config.params.n_tls) + ".csv"),
                        rl_sweep);
    return results;
}

std::vector<CompareRow> compare_report(const SweepTable& onoff, const SweepTable& rl) {
    if (onoff.size() != rl.size())
        throw GridMismatch("compare_report: tables have different sizes");
    std::vector<CompareRow> rows;
    rows.reserve(onoff.size());
    for (std::size_t i = 0; i < onoff.size(); ++i) {
        const auto& a = onoff[i];
        const auto& b = rl[i];
        if (a.n_tls != b.n_tls || std::abs(a.gtau - b.gtau) > 1e-9 * std::max(1.0, a.gtau))
            throw GridMismatch("compare_report: grid mismatch at row " + std::to_string(i));
        CompareRow row;
        row.n_tls = a.n_tls;
        row.gtau = a.gtau;
        row.delta_ergotropy1 = b.rec.ergotropy1 - a.rec.ergotropy1;
        row.variance_ratio = a.rec.variance1 == 0.0
                                 ? (b.rec.variance1 == 0.0 ? 1.0
                                                           : std::numeric_limits<double>::infinity())
                                 : b.rec.variance1 / a.rec.variance1;
        row.entropy1_onoff = a.rec.entropy1;
        row.entropy1_rl = b.rec.entropy1;
        row.etot_ratio_onoff = a.rec.etot_ratio;
        row.etot_ratio_rl = b.rec.etot_ratio;
        rows.push_back(row);
    }
    return rows;
}

void write_compare_csv(const std::filesystem::path& path, const std::vector<CompareRow>& rows) {
    std::string out =
        "n,gtau,delta_ergotropy1,variance_ratio,entropy1_onoff,entropy1_rl,"
        "etot_ratio_onoff,etot_ratio_rl\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n_tls);
        for (double v : {r.gtau, r.delta_ergotropy1, r.variance_ratio, r.entropy1_onoff,
                         r.entropy1_rl, r.etot_ratio_onoff, r.etot_ratio_rl}) {
            out += ',';
            out += format_g12(v);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_train_log_csv(const std::filesystem::path& path,
                         const std::vector<sac::EpisodeLog>& log) {
    std::string out = "episode,global_step,return,q_loss,actor_loss,alpha,target_entropy,entropy\n";
    for (const auto& e : log) {
        out += std::to_string(e.episode) + "," + std::to_string(e.global_step);
        for (double v :
             {e.episode_return, e.q_loss, e.actor_loss, e.alpha, e.target_entropy, e.entropy}) {
            out += ',';
            out += format_g12(v);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

}  // namespace dicke::harness
