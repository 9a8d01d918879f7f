#include "dicke/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace dicke {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void Protocol::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("Protocol: dt must be positive and finite");
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
        throw std::invalid_argument("Protocol: lambda_max must be positive and finite");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::invalid_argument("Protocol: omega0 must be positive and finite");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("Protocol: non-finite value at index " + std::to_string(i));
        if (std::abs(values[i]) > lambda_max)
            throw ControlOutOfRange("Protocol: |value| > lambda_max at index " + std::to_string(i));
    }
}

Protocol on_off(double tau, double dt, double lambda_max, double omega0) {
    if (!(dt > 0.0)) throw std::invalid_argument("on_off: dt must be positive");
    if (tau < 0.0) throw std::invalid_argument("on_off: tau must be non-negative");
    const double steps = tau / dt;
    const auto k = static_cast<long>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(k)) > 1e-9 * std::max(1.0, steps))
        throw GridMismatch("on_off: tau = " + std::to_string(tau) +
                           " is not a multiple of dt = " + std::to_string(dt));
    Protocol p{dt, lambda_max, omega0, std::vector<double>(static_cast<std::size_t>(k), lambda_max)};
    p.validate();
    return p;
}

void save(const Protocol& protocol, const std::filesystem::path& path) {
    protocol.validate();
    std::ostringstream out;
    out << "{\n";
    out << "  \"omega0\": " << fmt17(protocol.omega0) << ",\n";
    out << "  \"lambda_max\": " << fmt17(protocol.lambda_max) << ",\n";
    out << "  \"dt\": " << fmt17(protocol.dt) << ",\n";
    out << "  \"values\": [";
    for (std::size_t i = 0; i < protocol.values.size(); ++i) {
        if (i) out << ", ";
        out << fmt17(protocol.values[i]);
    }
    out << "]\n}\n";
    atomic_write(path, out.str());
}

Protocol load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open protocol file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("protocol parse error in " + path.string() + ": " + e.what());
    }
    Protocol p;
    try {
        p.omega0 = j.at("omega0").get<double>();
        p.lambda_max = j.at("lambda_max").get<double>();
        p.dt = j.at("dt").get<double>();
        p.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("protocol field error in " + path.string() + ": " + e.what());
    }
    p.validate();
    return p;
}

}  // namespace dicke
