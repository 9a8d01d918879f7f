#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dicke/harness/config.hpp"
#include "dicke/harness/csv.hpp"
#include "dicke/harness/experiment.hpp"

using namespace dicke;
using namespace dicke::harness;

namespace {

std::filesystem::path fresh_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig tiny_rl_config(const std::filesystem::path& out) {
    ExperimentConfig cfg;
    cfg.params = ModelParams::standard(2);
    cfg.gtau_values = {0.6};
    cfg.n_repetitions = 2;
    cfg.eval_fock_multiplier = 3;
    cfg.seed = 5;
    cfg.out_dir = out;
    cfg.n_threads = 1;
    cfg.sac.total_steps = 400;
    cfg.sac.n_init_rand = 100;
    cfg.sac.n_init_no_update = 100;
    cfg.sac.n_updates = 20;
    cfg.sac.batch_size = 16;
    cfg.sac.buffer_capacity = 1'000;
    cfg.sac.hidden1 = 16;
    cfg.sac.hidden2 = 12;
    return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("the caption grid rule reproduces the reference time steps") {
    CHECK(caption_gdt_rule(0.3) == 0.03);
    CHECK(caption_gdt_rule(0.59) == 0.03);
    CHECK(caption_gdt_rule(0.6) == 0.06);
    CHECK(caption_gdt_rule(2.4) == 0.06);

    ExperimentConfig cfg;
    cfg.params = ModelParams::standard(4);  // g̃ = 0.3
    CHECK(cfg.steps_for(0.3) == 10);
    CHECK(cfg.steps_for(0.6) == 10);
    CHECK(cfg.steps_for(1.5) == 25);
    CHECK(cfg.dt_for(1.5) == doctest::Approx(0.2));
    CHECK_THROWS_AS(cfg.steps_for(0.61), GridMismatch);
}

TEST_CASE("csv round trips and schema") {
    const auto dir = fresh_dir("dicke_test_csv");
    std::vector<StepRecord> records(3);
    records[1].t = 0.1;
    records[1].lam = -0.25;
    records[1].energy_per_unit = 0.5;
    records[1].ergotropy1 = 0.25;
    records[1].variance1 = 0.125;
    records[1].entropy1 = 0.4;
    records[1].etot_ratio = 1.2;
    write_records_csv(dir / "r.csv", records);
    const auto line1 = slurp(dir / "r.csv").substr(0, std::string(kRecordHeader).size());
    CHECK(line1 == kRecordHeader);
    const auto back = read_records_csv(dir / "r.csv");
    REQUIRE(back.size() == 3);
    CHECK(back[1].lam == records[1].lam);
    CHECK(back[1].etot_ratio == records[1].etot_ratio);

    SweepTable sweep{{4, 1.5, records[1]}, {4, 2.1, records[2]}};
    write_sweep_csv(dir / "s.csv", sweep);
    const auto sweep_back = read_sweep_csv(dir / "s.csv");
    REQUIRE(sweep_back.size() == 2);
    CHECK(sweep_back[0].n_tls == 4);
    CHECK(sweep_back[0].gtau == 1.5);
    CHECK(sweep_back[0].rec.ergotropy1 == records[1].ergotropy1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("evaluate_protocol: free protocol has exactly zero convergence diagnostic") {
    Protocol p;
    p.dt = 0.1;
    p.lambda_max = 0.3;
    p.values.assign(20, 0.0);
    double diag = -1.0;
    const auto records = evaluate_protocol(p, ModelParams::standard(2), 3, &diag);
    CHECK(diag == 0.0);
    REQUIRE(records.size() == 21);
    for (const auto& r : records) {
        CHECK(r.within_bounds(1.0));
        CHECK(r.ergotropy1 == 0.0);
        CHECK(r.etot_ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("on-off cutoff convergence against a larger-cutoff reference (N=4)") {
    const ModelParams params = ModelParams::standard(4);
    const Protocol p = on_off(1.5 / params.g_tilde(), 0.06 / params.g_tilde(), params.lambda_max);

    double diag_6n = -1.0;
    const auto rec6 = evaluate_protocol(p, params, 6, &diag_6n);
    CHECK(diag_6n <= 1e-3 * params.omega0);

    // reference at 10N: the 6N answer is converged
    const auto rec10 = evaluate_protocol(p, params, 10);
    CHECK(std::abs(rec6.back().ergotropy1 - rec10.back().ergotropy1) <= 1e-6);
}

TEST_CASE("on-off sweep: τ = 0 row is the discharged record, files deterministic") {
    const auto dir_a = fresh_dir("dicke_test_onoff_a");
    ExperimentConfig cfg;
    cfg.params = ModelParams::standard(2);
    cfg.gtau_values = {0.3, 0.6};
    cfg.eval_fock_multiplier = 3;
    cfg.out_dir = dir_a;
    const auto result = run_onoff_sweep(cfg);
    REQUIRE(result.sweep.size() == 2);
    for (const auto& row : result.sweep) CHECK(row.rec.within_bounds(cfg.params.omega0));
    // every curve starts discharged
    for (const auto& curve : result.curves) {
        CHECK(curve.records.front().energy_per_unit == 0.0);
        CHECK(curve.records.front().etot_ratio == doctest::Approx(1.0));
        CHECK(curve.records.front().lam == cfg.params.lambda_max);  // control on at t = 0
        CHECK(curve.records.back().lam == 0.0);                     // control off at τ
    }

    const auto dir_b = fresh_dir("dicke_test_onoff_b");
    cfg.out_dir = dir_b;
    (void)run_onoff_sweep(cfg);
    for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
        const auto name = entry.path().filename();
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("compare report: identical tables give zero deltas, mismatched grids throw") {
    StepRecord r;
    r.ergotropy1 = 0.3;
    r.variance1 = 0.1;
    r.entropy1 = 0.2;
    r.etot_ratio = 1.4;
    const SweepTable t{{4, 0.3, r}, {4, 0.6, r}};
    const auto rows = compare_report(t, t);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.delta_ergotropy1 == 0.0);
        CHECK(row.variance_ratio == 1.0);
        CHECK(row.entropy1_onoff == row.entropy1_rl);
    }
    SweepTable shifted = t;
    shifted[1].gtau = 0.9;
    CHECK_THROWS_AS(compare_report(t, shifted), GridMismatch);
    SweepTable shorter{t.front()};
    CHECK_THROWS_AS(compare_report(t, shorter), GridMismatch);
}

TEST_CASE("config json and overrides") {
    const auto dir = fresh_dir("dicke_test_cfg");
    const auto path = dir / "cfg.json";
    {
        std::ofstream out(path);
        out << R"({"n_tls": 3, "gtau_values": [0.3, 0.9], "seed": 42,
                   "sac": {"total_steps": 1234, "n_updates": 10}})";
    }
    const auto cfg = ExperimentConfig::from_json_file(path);
    CHECK(cfg.params.n_tls == 3);
    CHECK(cfg.params.n_fock == 6);  // 2N default
    CHECK(cfg.gtau_values == std::vector<double>{0.3, 0.9});
    CHECK(cfg.seed == 42);
    CHECK(cfg.sac.total_steps == 1234);
    CHECK(cfg.sac.n_updates == 10);
    CHECK(cfg.sac.batch_size == 256);  // untouched default

    ExperimentConfig cfg2 = cfg;
    cfg2.apply_override("n_tls", "5");
    CHECK(cfg2.params.n_tls == 5);
    CHECK(cfg2.params.n_fock == 10);
    cfg2.apply_override("sac.total_steps", "999");
    CHECK(cfg2.sac.total_steps == 999);
    CHECK_THROWS_AS(cfg2.apply_override("bogus", "1"), std::invalid_argument);
    std::filesystem::remove_all(dir);
}

TEST_CASE("rl experiment smoke: files, reproducible selection, determinism") {
    const auto dir_a = fresh_dir("dicke_test_rl_a");
    const auto cfg_a = tiny_rl_config(dir_a);
    const auto runs_a = run_rl_experiments(cfg_a);
    REQUIRE(runs_a.size() == 1);
    const auto& run = runs_a.front();
    REQUIRE(run.repetitions.size() == 2);
    CHECK(run.best().ergotropy_eval_cutoff >=
          run.repetitions[static_cast<std::size_t>(1 - run.best_index)].ergotropy_eval_cutoff);
    for (const auto& rec : run.best_records) CHECK(rec.within_bounds(cfg_a.params.omega0));
    for (const char* name :
         {"rl_N2_gtau0.6_protocol.json", "rl_N2_gtau0.6.csv", "rl_N2_gtau0.6_reps.csv",
          "rl_N2_gtau0.6_rep0_log.csv", "rl_N2_gtau0.6_rep1_log.csv", "rl_sweep_N2.csv"})
        CHECK(std::filesystem::exists(dir_a / name));

    // the deterministic protocol replays to the same final ergotropy
    const Protocol best = load(dir_a / "rl_N2_gtau0.6_protocol.json");
    const auto replay = evaluate_protocol(best, cfg_a.params, cfg_a.eval_fock_multiplier);
    CHECK(replay.back().ergotropy1 == doctest::Approx(run.best().ergotropy_eval_cutoff).epsilon(1e-9));

    // a second identical run produces byte-identical outputs (2 worker threads)
    const auto dir_b = fresh_dir("dicke_test_rl_b");
    auto cfg_b = tiny_rl_config(dir_b);
    cfg_b.n_threads = 2;
    (void)run_rl_experiments(cfg_b);
    for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
        const auto name = entry.path().filename();
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

}  // TEST_SUITE
