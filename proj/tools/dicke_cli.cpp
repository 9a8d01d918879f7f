// dicke_cli.cpp — Command-line front end: baselines, training, evaluation,
// comparison, selftest

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dicke/harness/config.hpp"
#include "dicke/harness/csv.hpp"
#include "dicke/harness/experiment.hpp"
#include "dicke/harness/selftest.hpp"
#include "dicke/protocol.hpp"

namespace {

using dicke::harness::ExperimentConfig;

struct ConfigArgs {
    std::string config_file;
    std::vector<std::string> overrides;  // key=value

    ExperimentConfig build() const {
        ExperimentConfig cfg = config_file.empty()
                                   ? ExperimentConfig()
                                   : ExperimentConfig::from_json_file(config_file);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("override '" + kv + "' is not key=value");
            cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();
        return cfg;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
        cmd->add_option("--set", overrides,
                        "override a config key, e.g. --set n_tls=16 --set sac.total_steps=50000");
    }
};

void add_grid_options(CLI::App* cmd, std::vector<double>& gtaus, std::vector<int>& ns) {
    cmd->add_option("--gtau", gtaus, "charging times g̃τ (space separated)");
    cmd->add_option("--n", ns, "battery sizes N");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dicke battery charging: on-off baselines and soft actor-critic optimization"};
    app.require_subcommand(1);

    // --- onoff ---------------------------------------------------------------
    auto* onoff = app.add_subcommand("onoff", "roll out the on-off baseline over a τ grid");
    ConfigArgs onoff_args;
    onoff_args.attach(onoff);
    std::vector<double> onoff_gtaus;
    std::vector<int> onoff_ns;
    add_grid_options(onoff, onoff_gtaus, onoff_ns);

    // --- train ---------------------------------------------------------------
    auto* train = app.add_subcommand("train", "train SAC agents and keep the best protocol");
    ConfigArgs train_args;
    train_args.attach(train);
    std::vector<double> train_gtaus;
    train->add_option("--gtau", train_gtaus, "charging times g̃τ to optimize");

    // --- eval ----------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "evaluate a protocol file, CSV on stdout");
    std::string eval_protocol;
    int eval_n = 0;
    int eval_mult = 6;
    eval->add_option("--protocol", eval_protocol, "protocol JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--n", eval_n, "number of TLS")->required();
    eval->add_option("--fock-mult", eval_mult, "Fock cutoff multiplier (n_fock = mult·N)");

    // --- compare ---------------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "compare two sweep CSVs (on-off vs RL)");
    std::string cmp_onoff, cmp_rl, cmp_out;
    compare->add_option("--onoff", cmp_onoff, "on-off sweep CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--rl", cmp_rl, "RL sweep CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", cmp_out, "output CSV (stdout when omitted)");

    // --- selftest --------------------------------------------------------------
    auto* selftest = app.add_subcommand("selftest", "run the built-in oracle checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (onoff->parsed()) {
            ExperimentConfig cfg = onoff_args.build();
            if (!onoff_gtaus.empty()) cfg.gtau_values = onoff_gtaus;
            if (!onoff_ns.empty()) cfg.n_values = onoff_ns;
            cfg.validate();
            const auto result = dicke::harness::run_onoff_sweep(cfg);
            std::cout << "wrote " << result.curves.size() << " on-off curves under "
                      << cfg.out_dir.string() << "\n";
            return 0;
        }
        if (train->parsed()) {
            ExperimentConfig cfg = train_args.build();
            if (!train_gtaus.empty()) cfg.gtau_values = train_gtaus;
            cfg.validate();
            const auto results = dicke::harness::run_rl_experiments(cfg);
            for (const auto& run : results) {
                const auto& best = run.best();
                std::cout << "N=" << run.n_tls << " gtau=" << run.gtau << ": best rep "
                          << run.best_index << " ergotropy " << best.ergotropy_eval_cutoff
                          << " (train-cutoff " << best.ergotropy_train_cutoff
                          << ", convergence diag " << run.convergence_diag << ")\n";
            }
            std::cout << "outputs under " << cfg.out_dir.string() << "\n";
            return 0;
        }
        if (eval->parsed()) {
            const dicke::Protocol protocol = dicke::load(eval_protocol);
            dicke::ModelParams params;
            params.n_tls = eval_n;
            params.omega0 = protocol.omega0;
            params.lambda_max = protocol.lambda_max;
            params.n_fock = 2 * eval_n;
            params.validate();
            const auto records = dicke::harness::evaluate_protocol(protocol, params, eval_mult);
            std::cout << dicke::harness::kRecordHeader << "\n";
            for (const auto& r : records) {
                std::cout << dicke::harness::format_g12(r.t);
                for (double v :
                     {r.lam, r.energy_per_unit, r.ergotropy1, r.variance1, r.entropy1, r.etot_ratio})
                    std::cout << ',' << dicke::harness::format_g12(v);
                std::cout << "\n";
            }
            return 0;
        }
        if (compare->parsed()) {
            const auto rows = dicke::harness::compare_report(
                dicke::harness::read_sweep_csv(cmp_onoff), dicke::harness::read_sweep_csv(cmp_rl));
            if (!cmp_out.empty()) {
                dicke::harness::write_compare_csv(cmp_out, rows);
            } else {
                std::cout << "n,gtau,delta_ergotropy1,variance_ratio,entropy1_onoff,entropy1_rl,"
                             "etot_ratio_onoff,etot_ratio_rl\n";
                for (const auto& r : rows) {
                    std::cout << r.n_tls;
                    for (double v : {r.gtau, r.delta_ergotropy1, r.variance_ratio, r.entropy1_onoff,
                                     r.entropy1_rl, r.etot_ratio_onoff, r.etot_ratio_rl})
                        std::cout << ',' << dicke::harness::format_g12(v);
                    std::cout << "\n";
                }
            }
            return 0;
        }
        if (selftest->parsed()) return dicke::harness::run_selftest(std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
