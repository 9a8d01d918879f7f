#include "dicke/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dicke::harness {

double caption_gdt_rule(double gtau) { return gtau < 0.6 ? 0.03 : 0.06; }

ExperimentConfig::ExperimentConfig() {
    sac.total_steps = 100'000;  // desk-scale default; the full-paper 480k stays configurable
    gtau_values = {1.5};
    if (const char* dir = std::getenv("DICKE_OUT_DIR")) out_dir = dir;
}

ModelParams ExperimentConfig::params_for(int n_tls, int fock_multiplier) const {
    ModelParams p = params;
    p.n_tls = n_tls;
    p.n_fock = fock_multiplier * n_tls;
    p.validate();
    return p;
}

double ExperimentConfig::gdt_for(double gtau) const {
    return explicit_gdt > 0.0 ? explicit_gdt : caption_gdt_rule(gtau);
}

double ExperimentConfig::dt_for(double gtau) const { return gdt_for(gtau) / params.g_tilde(); }

int ExperimentConfig::steps_for(double gtau) const {
    const double steps = gtau / gdt_for(gtau);
    const auto k = static_cast<long>(std::llround(steps));
    if (k < 1 || std::abs(steps - static_cast<double>(k)) > 1e-9 * std::max(1.0, steps))
        throw GridMismatch("gtau = " + std::to_string(gtau) + " is not commensurate with gdt = " +
                           std::to_string(gdt_for(gtau)));
    return static_cast<int>(k);
}

void ExperimentConfig::validate() const {
    params.validate();
    sac.validate();
    if (gtau_values.empty()) throw std::invalid_argument("config: no gtau values");
    for (double g : gtau_values) (void)steps_for(g);
    for (int n : n_values)
        if (n < 1) throw std::invalid_argument("config: bad n value");
    if (n_repetitions < 1) throw std::invalid_argument("config: n_repetitions must be >= 1");
    if (eval_fock_multiplier < 2)
        throw std::invalid_argument("config: eval_fock_multiplier must be >= 2");
}

namespace {

void parse_sac(const nlohmann::json& j, sac::SacConfig& s) {
    if (j.contains("batch_size")) s.batch_size = j.at("batch_size").get<int>();
    if (j.contains("total_steps")) s.total_steps = j.at("total_steps").get<long>();
    if (j.contains("lr")) s.lr = j.at("lr").get<double>();
    if (j.contains("lr_alpha")) s.lr_alpha = j.at("lr_alpha").get<double>();
    if (j.contains("gamma")) s.gamma = j.at("gamma").get<double>();
    if (j.contains("polyak")) s.polyak = j.at("polyak").get<double>();
    if (j.contains("buffer_capacity")) s.buffer_capacity = j.at("buffer_capacity").get<int>();
    if (j.contains("hidden1")) s.hidden1 = j.at("hidden1").get<int>();
    if (j.contains("hidden2")) s.hidden2 = j.at("hidden2").get<int>();
    if (j.contains("n_init_rand")) s.n_init_rand = j.at("n_init_rand").get<long>();
    if (j.contains("n_init_no_update")) s.n_init_no_update = j.at("n_init_no_update").get<long>();
    if (j.contains("n_updates")) s.n_updates = j.at("n_updates").get<int>();
    if (j.contains("h_start")) s.h_start = j.at("h_start").get<double>();
    if (j.contains("h_end")) s.h_end = j.at("h_end").get<double>();
    if (j.contains("h_decay")) s.h_decay = j.at("h_decay").get<double>();
    if (j.contains("c_mean")) s.c_mean = j.at("c_mean").get<double>();
    if (j.contains("c_width")) s.c_width = j.at("c_width").get<double>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config: parse error in " + path.string() + ": " + e.what());
    }

    ExperimentConfig c;
    if (j.contains("n_tls")) c.params.n_tls = j.at("n_tls").get<int>();
    if (j.contains("omega0")) c.params.omega0 = j.at("omega0").get<double>();
    if (j.contains("lambda_max")) c.params.lambda_max = j.at("lambda_max").get<double>();
    c.params.n_fock = j.contains("n_fock") ? j.at("n_fock").get<int>() : 2 * c.params.n_tls;
    if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<int>>();
    if (j.contains("gtau_values")) c.gtau_values = j.at("gtau_values").get<std::vector<double>>();
    if (j.contains("gdt")) c.explicit_gdt = j.at("gdt").get<double>();
    if (j.contains("n_repetitions")) c.n_repetitions = j.at("n_repetitions").get<int>();
    if (j.contains("eval_fock_multiplier"))
        c.eval_fock_multiplier = j.at("eval_fock_multiplier").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir") && !std::getenv("DICKE_OUT_DIR"))
        c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("n_threads")) c.n_threads = j.at("n_threads").get<int>();
    if (j.contains("sac")) parse_sac(j.at("sac"), c.sac);
    c.validate();
    return c;
}

void ExperimentConfig::apply_override(const std::string& key, const std::string& value) {
    const auto as_long = [&] { return std::stol(value); };
    const auto as_double = [&] { return std::stod(value); };
    if (key == "n_tls") {
        const bool fock_was_default = (params.n_fock == 2 * params.n_tls);
        params.n_tls = static_cast<int>(as_long());
        if (fock_was_default) params.n_fock = 2 * params.n_tls;
    } else if (key == "omega0") {
        params.omega0 = as_double();
    } else if (key == "lambda_max") {
        params.lambda_max = as_double();
    } else if (key == "n_fock") {
        params.n_fock = static_cast<int>(as_long());
    } else if (key == "gdt") {
        explicit_gdt = as_double();
    } else if (key == "n_repetitions") {
        n_repetitions = static_cast<int>(as_long());
    } else if (key == "eval_fock_multiplier") {
        eval_fock_multiplier = static_cast<int>(as_long());
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(as_long());
    } else if (key == "n_threads") {
        n_threads = static_cast<int>(as_long());
    } else if (key == "out_dir") {
        out_dir = value;
    } else if (key == "sac.total_steps") {
        sac.total_steps = as_long();
    } else if (key == "sac.batch_size") {
        sac.batch_size = static_cast<int>(as_long());
    } else if (key == "sac.lr") {
        sac.lr = as_double();
    } else if (key == "sac.lr_alpha") {
        sac.lr_alpha = as_double();
    } else if (key == "sac.gamma") {
        sac.gamma = as_double();
    } else if (key == "sac.polyak") {
        sac.polyak = as_double();
    } else if (key == "sac.buffer_capacity") {
        sac.buffer_capacity = static_cast<int>(as_long());
    } else if (key == "sac.n_init_rand") {
        sac.n_init_rand = as_long();
    } else if (key == "sac.n_init_no_update") {
        sac.n_init_no_update = as_long();
    } else if (key == "sac.n_updates") {
        sac.n_updates = static_cast<int>(as_long());
    } else if (key == "sac.c_mean") {
        sac.c_mean = as_double();
    } else if (key == "sac.c_width") {
        sac.c_width = as_double();
    } else {
        throw std::invalid_argument("config: unknown override key '" + key + "'");
    }
}

}  // namespace dicke::harness
