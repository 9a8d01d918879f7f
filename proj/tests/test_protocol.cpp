#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dicke/protocol.hpp"

using namespace dicke;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("on-off construction and grid checks") {
    // Fig.-2-style grid: g̃τ = 0.3, g̃Δt = 0.03 at g̃ = 0.3 → τ = 1, dt = 0.1
    const Protocol p = on_off(1.0, 0.1, 0.3);
    CHECK(p.size() == 10);
    for (double v : p.values) CHECK(v == 0.3);

    CHECK(on_off(0.0, 0.1, 0.3).size() == 0);
    CHECK(on_off(2.0, 0.2, 0.3).size() == 10);
    CHECK_THROWS_AS(on_off(1.05, 0.1, 0.3), GridMismatch);
}

TEST_CASE("round trip is bitwise lossless") {
    Protocol p = on_off(1.0, 0.1, 0.3);
    p.values[0] = 0.123456789012345678;  // not representable exactly; rounds once
    p.values[5] = -1.0 / 3.0 * 0.9;
    p.dt = 0.1000000000000000055511151231257827;
    const auto path = temp_file("dicke_test_protocol.json");
    save(p, path);
    const Protocol q = load(path);
    std::filesystem::remove(path);
    CHECK(q.dt == p.dt);
    CHECK(q.lambda_max == p.lambda_max);
    CHECK(q.omega0 == p.omega0);
    REQUIRE(q.values.size() == p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) CHECK(q.values[i] == p.values[i]);
}

TEST_CASE("load rejects out-of-range and non-finite values") {
    const auto path = temp_file("dicke_test_bad_protocol.json");
    {
        std::ofstream out(path);
        out << R"({"omega0": 1.0, "lambda_max": 0.3, "dt": 0.1, "values": [0.2, 0.4]})";
    }
    CHECK_THROWS_AS(load(path), ControlOutOfRange);
    {
        std::ofstream out(path);
        out << R"({"omega0": 1.0, "lambda_max": 0.3, "dt": 0.1, "values": [0.2, NaN]})";
    }
    CHECK_THROWS(load(path));
    {
        std::ofstream out(path);
        out << R"({"omega0": 1.0, "lambda_max": 0.3, "values": [0.2]})";  // missing dt
    }
    CHECK_THROWS(load(path));
    std::filesystem::remove(path);
}

TEST_CASE("validation catches bad grids and bounds") {
    Protocol p = on_off(0.5, 0.1, 0.3);
    p.dt = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.dt = 0.1;
    p.values.push_back(0.30000001);
    CHECK_THROWS_AS(p.validate(), ControlOutOfRange);
}

}  // TEST_SUITE
