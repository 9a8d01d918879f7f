// acceptance_main.cpp — End-to-end acceptance suite
//
// Each criterion prints one [PASS]/[FAIL] line; the exit code is the number of
// failures. Criteria are selected by number on the command line (all when none
// given). Outputs land under ./acceptance_out for inspection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/dynamics.hpp"
#include "dicke/harness/config.hpp"
#include "dicke/harness/csv.hpp"
#include "dicke/harness/experiment.hpp"
#include "dicke/harness/oracles.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/protocol.hpp"
#include "dicke/rl_env.hpp"
#include "dicke/sac/trainer.hpp"

using namespace dicke;
using harness::ExperimentConfig;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what << " ("
              << detail << ")" << std::endl;
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(6);
    ss << x;
    return ss.str();
}

// ---------------------------------------------------------------- criterion 1
// Reduced density matrix: Eq.-level closed form vs brute-force partial trace.
void criterion_1() {
    std::mt19937_64 rng(1001);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int n : {2, 3, 4}) {
        const ModelParams p = ModelParams::standard(n);
        const BasisLayout layout = build_basis(p);
        const auto full = oracle::build_full_basis_ops(p.n_tls, p.n_fock);
        for (int trial = 0; trial < 100; ++trial) {
            Wavefunction psi{layout, Eigen::VectorXcd(layout.dim())};
            for (int i = 0; i < layout.dim(); ++i) psi.amp(i) = Complex(gauss(rng), gauss(rng));
            psi.amp /= psi.amp.norm();
            const Eigen::Matrix2cd expected = oracle::partial_trace_qubit0(
                oracle::embed_symmetric(psi.amp, full), p.n_tls, p.n_fock);
            worst = std::max(worst,
                             (expected - reduced_density_1(p, psi).rho).cwiseAbs().maxCoeff());
        }
    }
    report(1, worst <= 1e-10, "reduced density equals brute-force partial trace, N in {2,3,4}",
           "max |delta| = " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 2
// Exact per-segment propagation vs adaptive Dormand-Prince integration.
void criterion_2() {
    const ModelParams p{1, 1.0, 0.3, 6};
    const auto ops = std::make_shared<const DickeOperators>(build_operators(p));
    const Propagator prop(ops, 0.1);
    Eigen::MatrixXcd h = 0.3 * ops->hint.matrix;
    h.diagonal() += ops->h0_diag.cast<Complex>();

    Wavefunction psi = initial_state(p, ops->layout);
    Eigen::VectorXcd reference = psi.amp;
    double worst_amp = 0.0, worst_drift = 0.0;
    for (int i = 0; i < 200; ++i) {
        psi = prop.step(psi, 0.3);
        reference = oracle::integrate_schrodinger(h, reference, 0.1);
        worst_amp = std::max(worst_amp, (psi.amp - reference).cwiseAbs().maxCoeff());
        worst_drift = std::max(worst_drift, std::abs(psi.norm() - 1.0));
    }
    report(2, worst_amp <= 1e-8 && worst_drift <= 1e-10,
           "propagator matches an independent ODE integration over 200 steps",
           "max amplitude error = " + fmt(worst_amp) + ", max norm drift = " + fmt(worst_drift));
}

// ---------------------------------------------------------------- criterion 3
// Free evolution conserves every figure of merit of the discharged state.
void criterion_3() {
    const ModelParams p = ModelParams::standard(4);
    const auto ops = std::make_shared<const DickeOperators>(build_operators(p));
    const Propagator prop(ops, 0.1);
    Wavefunction psi = initial_state(p, ops->layout);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        psi = prop.step(psi, 0.0);
        const StepRecord r = record(*ops, psi, 0.0, 0.1 * (i + 1));
        worst = std::max({worst, std::abs(r.energy_per_unit), std::abs(r.ergotropy1),
                          std::abs(r.variance1), std::abs(r.entropy1),
                          std::abs(r.etot_ratio - 1.0)});
    }
    report(3, worst <= 1e-10, "500 free-evolution steps leave the discharged record invariant",
           "max deviation = " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 4
// On-off baseline at N = 16 on the reference grid.
void criterion_4() {
    ExperimentConfig cfg;
    cfg.params = ModelParams::standard(16);
    cfg.eval_fock_multiplier = 6;
    cfg.out_dir = "acceptance_out";
    cfg.gtau_values.clear();
    for (int k = 1; k * 0.03 < 0.6 - 1e-12; ++k) cfg.gtau_values.push_back(k * 0.03);
    for (int k = 10; k * 0.06 <= 3.0 + 1e-12; ++k) cfg.gtau_values.push_back(k * 0.06);

    const auto result = harness::run_onoff_sweep(cfg);
    double peak_erg = 0.0, peak_energy = 0.0, peak_ratio = 0.0;
    for (const auto& row : result.sweep) {
        peak_erg = std::max(peak_erg, row.rec.ergotropy1);
        peak_energy = std::max(peak_energy, row.rec.energy_per_unit);
        peak_ratio = std::max(peak_ratio, row.rec.etot_ratio);
    }
    const bool erg_ok = peak_erg >= 0.25 && peak_erg <= 0.35;
    const bool energy_ok = peak_energy <= 0.55;
    const bool ratio_ok = peak_ratio >= 1.45 && peak_ratio <= 1.75;
    report(4, erg_ok && energy_ok && ratio_ok,
           "on-off N=16 sweep reproduces the reference peaks",
           "peak ergotropy = " + fmt(peak_erg) + " (want 0.30+-0.05), peak energy/unit = " +
               fmt(peak_energy) + " (want <= 0.55), peak E_tot ratio = " + fmt(peak_ratio) +
               " (want 1.6+-0.15)");
}

// ---------------------------------------------------------------- criterion 5
// SAC building blocks: gradients, entropy bookkeeping, toy convergence.
void criterion_5() {
    // (a) finite-difference checks of the three losses at 10 random probes each
    sac::SacConfig cfg;
    cfg.hidden1 = 64;
    cfg.hidden2 = 48;
    cfg.batch_size = 16;
    cfg.buffer_capacity = 64;
    sac::SacAgent<double> agent(6, 0.3, cfg, 2024);
    agent.policy().net.layers.back().b(1) = 0.7;  // well-conditioned sigma

    std::mt19937_64 rng(2025);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> act(-0.3, 0.3);
    sac::ReplayBuffer<double> buffer(6, 64);
    for (int i = 0; i < 64; ++i) {
        Eigen::VectorXd s(6), sn(6);
        for (int k = 0; k < 6; ++k) {
            s(k) = gauss(rng);
            sn(k) = gauss(rng);
        }
        buffer.add(s, act(rng), gauss(rng), sn, i % 5 == 4);
    }
    const auto batch = buffer.sample(16, rng);
    const auto xi = agent.draw_noise(16);
    const double h = 1e-6;
    double worst_rel = 0.0;
    const auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
    };

    sac::Mlp<double>::Grads g;
    std::uniform_int_distribution<int> layer_pick(0, 2);
    const auto probe_net = [&](sac::Mlp<double>& net, const sac::Mlp<double>::Grads& grads,
                               auto&& loss_fn) {
        for (int probe = 0; probe < 10; ++probe) {
            const int l = layer_pick(rng);
            auto& w = net.layers[static_cast<std::size_t>(l)].w;
            const int r = std::uniform_int_distribution<int>(0, static_cast<int>(w.rows()) - 1)(rng);
            const int c = std::uniform_int_distribution<int>(0, static_cast<int>(w.cols()) - 1)(rng);
            const double saved = w(r, c);
            w(r, c) = saved + h;
            const double lp = loss_fn();
            w(r, c) = saved - h;
            const double lm = loss_fn();
            w(r, c) = saved;
            worst_rel = std::max(worst_rel,
                                 rel(grads.dw[static_cast<std::size_t>(l)](r, c), (lp - lm) / (2 * h)));
        }
    };

    agent.actor_backward(batch, xi, g);
    probe_net(agent.policy().net, g, [&] { return agent.actor_loss(batch, xi); });
    const auto y = agent.critic_targets(batch, xi);
    agent.critic_backward(batch, y, 0, g);
    probe_net(agent.q1(), g, [&] { return agent.critic_loss(batch, xi, 0); });
    agent.critic_backward(batch, y, 1, g);
    probe_net(agent.q2(), g, [&] { return agent.critic_loss(batch, xi, 1); });
    for (double la : {-0.5, 0.0, 0.5}) {
        agent.l_alpha() = la;
        const double analytic = agent.temperature_grad(batch, xi, 0.3);
        agent.l_alpha() = la + h;
        const double lp = agent.temperature_loss(batch, xi, 0.3);
        agent.l_alpha() = la - h;
        const double lm = agent.temperature_loss(batch, xi, 0.3);
        agent.l_alpha() = la;
        worst_rel = std::max(worst_rel, rel(analytic, (lp - lm) / (2 * h)));
    }
    const bool grads_ok = worst_rel <= 1e-4;

    // (b) closed-form entropy vs 1e6-sample Monte Carlo
    sac::SquashedGaussianPolicy<double> policy;
    policy.net = sac::Mlp<double>::create({2, 4, 2}, rng);
    for (auto& l : policy.net.layers) {
        l.w.setZero();
        l.b.setZero();
    }
    policy.net.layers.back().b(1) = std::sqrt(1.0 - 1e-7);  // sigma = 1
    policy.a_lo = -0.3;
    policy.a_hi = 0.3;
    const Eigen::VectorXd s2 = Eigen::VectorXd::Zero(2);
    double acc = 0.0;
    for (int i = 0; i < 1'000'000; ++i) acc -= policy.sample(s2, gauss(rng)).log_prob_ref;
    const double mc = acc / 1e6;
    const double quad = oracle::squashed_gaussian_entropy(0.0, 1.0);
    const bool entropy_ok = std::abs(mc - quad) <= 0.003;

    // (c) one-step quadratic bandit at the production architecture and scalar
    class Bandit : public sac::Environment {
    public:
        Eigen::VectorXd reset() override { return Eigen::VectorXd::Zero(2); }
        sac::StepOutcome step(double a) override {
            return {Eigen::VectorXd::Ones(2), -(a - 0.1) * (a - 0.1), true};
        }
        int state_dim() const override { return 2; }
        double action_bound() const override { return 0.3; }
    } bandit;

    sac::SacConfig toy;  // Table-S1 architecture, shortened schedule
    toy.total_steps = 20'000;
    toy.buffer_capacity = 20'000;
    toy.n_init_rand = 1'000;
    toy.n_init_no_update = 500;
    sac::Trainer<sac::Real> trainer(bandit, toy, 4096);
    trainer.run();
    const double learned = trainer.agent().mean_action(bandit.reset());
    const bool toy_ok = std::abs(learned - 0.1) <= 0.02;

    report(5, grads_ok && entropy_ok && toy_ok, "SAC components",
           "worst gradient rel err = " + fmt(worst_rel) + " (want <= 1e-4), |MC - closed form| = " +
               fmt(std::abs(mc - quad)) + " (want <= 0.003), bandit action = " + fmt(learned) +
               " (want 0.1+-0.02)");
}

// ---------------------------------------------------------------- criterion 6
// Desk-scale end-to-end improvement over the on-off baseline.
void criterion_6() {
    const double gtau_main = 1.5, gtau_second = 2.1;

    ExperimentConfig cfg;
    cfg.params = ModelParams::standard(4);
    cfg.gtau_values = {gtau_main};
    cfg.n_repetitions = 4;
    cfg.eval_fock_multiplier = 6;
    cfg.seed = 20'260'810;
    cfg.out_dir = "acceptance_out";
    cfg.sac.total_steps = 100'000;

    const auto runs_main = harness::run_rl_experiments(cfg);
    const auto& run = runs_main.front();

    ExperimentConfig cfg2 = cfg;
    cfg2.gtau_values = {gtau_second};
    cfg2.n_repetitions = 2;
    cfg2.seed = cfg.seed + 100;
    const auto runs_second = harness::run_rl_experiments(cfg2);
    const auto& run2 = runs_second.front();

    // on-off references at the same charging times and cutoff
    const auto onoff_records = [&](double gtau) {
        const Protocol p = on_off(cfg.tau_for(gtau), cfg.dt_for(gtau), cfg.params.lambda_max,
                                  cfg.params.omega0);
        return harness::evaluate_protocol(p, cfg.params, cfg.eval_fock_multiplier);
    };
    const StepRecord onoff_main = onoff_records(gtau_main).back();

    const double rl_erg = run.best_records.back().ergotropy1;
    const double rl_var = run.best_records.back().variance1;
    const double rl_erg2 = run2.best_records.back().ergotropy1;

    const bool improvement_ok = rl_erg >= 1.5 * onoff_main.ergotropy1;
    const bool variance_ok = rl_var < onoff_main.variance1;
    const bool monotone_ok = rl_erg2 >= rl_erg;

    // repetition dispersion (reference: error bars hardly visible)
    double mean = 0.0;
    for (const auto& r : run.repetitions) mean += r.ergotropy_eval_cutoff;
    mean /= static_cast<double>(run.repetitions.size());
    double var = 0.0;
    for (const auto& r : run.repetitions) {
        const double d = r.ergotropy_eval_cutoff - mean;
        var += d * d;
    }
    const double stddev = std::sqrt(var / static_cast<double>(run.repetitions.size()));
    const bool dispersion_ok = stddev <= 0.05;

    report(6, improvement_ok && variance_ok && monotone_ok && dispersion_ok,
           "RL improves on the on-off baseline at desk scale (N=4)",
           "RL ergotropy(gtau=1.5) = " + fmt(rl_erg) + " vs on-off " + fmt(onoff_main.ergotropy1) +
               " (want >= 1.5x), RL variance = " + fmt(rl_var) + " vs on-off " +
               fmt(onoff_main.variance1) + " (want <), ergotropy(gtau=2.1) = " + fmt(rl_erg2) +
               " (want >= gtau=1.5 value), repetition std = " + fmt(stddev) + " (want <= 0.05)");
}

// ---------------------------------------------------------------- criterion 7
// Byte-for-byte reproducibility of every emitted CSV.
void criterion_7() {
    const auto read_all = [](const std::filesystem::path& dir) {
        std::vector<std::pair<std::string, std::string>> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            files.emplace_back(entry.path().filename().string(), ss.str());
        }
        std::sort(files.begin(), files.end());
        return files;
    };

    const auto run_once = [](const std::filesystem::path& dir) {
        std::filesystem::remove_all(dir);
        ExperimentConfig cfg;
        cfg.params = ModelParams::standard(2);
        cfg.gtau_values = {0.6, 1.2};
        cfg.n_repetitions = 2;
        cfg.eval_fock_multiplier = 6;
        cfg.seed = 77;
        cfg.out_dir = dir;
        cfg.sac.total_steps = 2'000;
        cfg.sac.n_init_rand = 300;
        cfg.sac.n_init_no_update = 300;
        cfg.sac.hidden1 = 64;
        cfg.sac.hidden2 = 48;
        cfg.sac.batch_size = 64;
        cfg.sac.buffer_capacity = 4'000;
        (void)harness::run_onoff_sweep(cfg);
        (void)harness::run_rl_experiments(cfg);
    };

    run_once("acceptance_out/determinism_a");
    run_once("acceptance_out/determinism_b");
    const auto a = read_all("acceptance_out/determinism_a");
    const auto b = read_all("acceptance_out/determinism_b");
    bool same = a.size() == b.size();
    std::string first_diff = "none";
    if (same) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) {
                same = false;
                first_diff = a[i].first;
                break;
            }
    } else {
        first_diff = "file count";
    }
    report(7, same, "two identical runs emit byte-identical outputs",
           same ? std::to_string(a.size()) + " files compared" : "first difference: " + first_diff);
}

// ---------------------------------------------------------------- criterion 8
// Schedule arithmetic pinned by the hyperparameter table.
void criterion_8() {
    const sac::SacConfig cfg;
    const bool start_ok = sac::entropy_target(cfg, 0.0) == 0.72;
    const bool end_ok = sac::entropy_target(cfg, 1e18) == -3.0;
    const bool blend_ok = blend_coefficient(40'000, 40'000, 20'000) == 0.5;
    report(8, start_ok && end_ok && blend_ok, "schedule arithmetic is exact",
           "entropy_target(0) = " + fmt(sac::entropy_target(cfg, 0.0)) + ", entropy_target(inf) = " +
               fmt(sac::entropy_target(cfg, 1e18)) + ", blend(40k) = " +
               fmt(blend_coefficient(40'000, 40'000, 20'000)));
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8};

    std::filesystem::create_directories("acceptance_out");
    for (int c : which) {
        try {
            switch (c) {
                case 1: criterion_1(); break;
                case 2: criterion_2(); break;
                case 3: criterion_3(); break;
                case 4: criterion_4(); break;
                case 5: criterion_5(); break;
                case 6: criterion_6(); break;
                case 7: criterion_7(); break;
                case 8: criterion_8(); break;
                default:
                    std::cerr << "unknown criterion " << c << "\n";
                    ++g_failures;
            }
        } catch (const std::exception& e) {
            report(c, false, "threw an exception", e.what());
        }
    }
    return g_failures == 0 ? 0 : 1;
}
