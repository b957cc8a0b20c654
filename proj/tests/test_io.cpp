#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "tbci/errors.hpp"
#include "tbci/io.hpp"

using tbci::ConfigError;
using tbci::format_float;
using tbci::Table;
using tbci::to_csv;
using tbci::to_json;
using tbci::write_file;

namespace {

Table sample_table() {
    Table t;
    t.meta = {{"potential", "harmonic"}, {"K", "20"}};
    t.columns = {"g", "E0", "status"};
    t.rows = {{format_float(0.5), format_float(1.1742600536), "ok"},
              {"nan", "nan", "interaction strength out of range"}};
    return t;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_float round-trips every double losslessly") {
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double x = mant(rng) * std::pow(10.0, expo(rng));
        const std::string s = format_float(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    for (const double x : {0.0, -0.0, 1.0, -1.0, 0.1, 1e308, 5e-324}) {
        CHECK(std::strtod(format_float(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("format_float output is fixed-width scientific") {
    CHECK(format_float(1.0) == "1.0000000000000000e+00");
    CHECK(format_float(-0.5) == "-5.0000000000000000e-01");
    CHECK(format_float(1.0) == format_float(1.0));
}

TEST_CASE("CSV output matches the golden form") {
    const std::string expected =
        "# potential = harmonic\n"
        "# K = 20\n"
        "g,E0,status\n"
        "5.0000000000000000e-01,1.1742600536000001e+00,ok\n"
        "nan,nan,interaction strength out of range\n";
    CHECK(to_csv(sample_table()) == expected);
}

TEST_CASE("JSON output parses and preserves types") {
    const nlohmann::json j = nlohmann::json::parse(to_json(sample_table()));
    CHECK(j["meta"]["potential"] == "harmonic");
    CHECK(j["meta"]["K"] == "20");
    REQUIRE(j["columns"].size() == 3);
    CHECK(j["columns"][0] == "g");
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0][0].is_number());
    CHECK(j["rows"][0][0].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(j["rows"][0][2] == "ok");
    // nan is not a JSON number, so those cells must come through as strings
    CHECK(j["rows"][1][0].is_string());
    CHECK(j["rows"][1][0] == "nan");
}

TEST_CASE("empty table still produces valid JSON") {
    Table t;
    t.columns = {"x"};
    const nlohmann::json j = nlohmann::json::parse(to_json(t));
    CHECK(j["rows"].empty());
    CHECK(j["meta"].empty());
}

TEST_CASE("write_file round-trips bytes and reports unwritable paths") {
    const std::string path = "/tmp/tbci_io_test.csv";
    const std::string content = to_csv(sample_table());
    write_file(path, content);
    std::ifstream f(path, std::ios::binary);
    std::ostringstream read_back;
    read_back << f.rdbuf();
    CHECK(read_back.str() == content);

    CHECK_THROWS_AS(write_file("/tmp/tbci_no_such_dir/out.csv", content), ConfigError);
}

}
