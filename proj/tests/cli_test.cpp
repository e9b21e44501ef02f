#include "cli/commands.hpp"

#include "c3rotor/field.hpp"
#include "c3rotor/perturbation.hpp"
#include "c3rotor/spectrum.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace c3rotor;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "c3rotor");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Data rows of a commented CSV, split on commas; the header row is dropped.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string meta(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    const std::string prefix = "# " + key + ": ";
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return {};
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
    ~ScopedEnv() { unsetenv(name_); }

private:
    const char* name_;
};

}  // namespace

TEST_CASE("spectrum command") {
    auto r = run_cli({"spectrum", "--species", "rawA", "--lambda", "0.1", "--levels", "5"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(std::abs(std::stod(rows[1][2]) - 8.99990740760586) < 1e-12);
    CHECK(std::abs(std::stod(rows[2][2]) - 9.00046293268167) < 1e-12);

    r = run_cli({"spectrum", "--species", "EA", "--lambda", "0", "--levels", "3"});
    REQUIRE(r.code == 0);
    const auto e = csv_rows(r.out);
    CHECK(e[0][2] == "1");
    CHECK(e[1][2] == "4");
    CHECK(e[2][2] == "16");
}

TEST_CASE("spectrum at 30 digits matches the series") {
    const auto r = run_cli({"spectrum", "--species", "A+", "--lambda", "0.1", "--levels", "2", "--precision", "30"});
    REQUIRE(r.code == 0);
    CHECK(meta(r.out, "precision_digits") == "30");
    const Extended ground(csv_rows(r.out)[0][2]);
    const Extended series = evaluate_series(rs_series(SymmetrySpecies::APlus, 0, 16), Extended("0.1")).value;
    CHECK(abs(ground - series) < Extended("1e-14"));
}

TEST_CASE("series command") {
    auto r = run_cli({"series", "--species", "A+", "--level", "0", "--order", "6"});
    REQUIRE(r.code == 0);
    std::vector<std::string> coeffs;
    for (const auto& row : csv_rows(r.out)) coeffs.push_back(row[1]);
    CHECK(coeffs == std::vector<std::string>{"0", "-1/18", "7/23328", "-29/8503056"});

    r = run_cli({"series", "--species", "EA", "--level", "4", "--order", "2"});
    REQUIRE(r.code == 0);
    CHECK(csv_rows(r.out)[1][1] == "1/374");
    r = run_cli({"series", "--species", "A-", "--level", "0", "--order", "0"});
    REQUIRE(r.code == 0);
    CHECK(csv_rows(r.out)[0][1] == "9");
    CHECK(run_cli({"series", "--species", "rawA", "--level", "0", "--order", "2"}).code == 1);
}

TEST_CASE("splitting command") {
    auto r = run_cli({"splitting", "--n", "1", "--lambda", "0.1"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(std::stod(csv_rows(r.out)[0][2]) - 5.5552507581e-4) < 1e-9);

    r = run_cli({"splitting", "--n", "2", "--lambda", "0.1", "--precision", "30"});
    REQUIRE(r.code == 0);
    CHECK(csv_rows(r.out)[0][2].rfind("4.76", 0) == 0);

    r = run_cli({"splitting", "--n", "1", "--lambda", "0.02,0.04,0.08", "--fit"});
    REQUIRE(r.code == 0);
    CHECK(csv_rows(r.out).size() == 3);
    CHECK(std::abs(std::stod(meta(r.out, "slope_n1")) - 2.0) < 0.05);
}

TEST_CASE("ep command") {
    auto r = run_cli({"ep", "--species", "EA", "--pair", "0,1", "--digits", "20"});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(abs(Extended(rows[0][3]) / Extended("2.9356105095073260590") - 1) < Extended("1e-19"));
    CHECK(abs(Extended(rows[0][4]) / Extended("2.6226454301444952679") - 1) < Extended("1e-19"));
    CHECK(rows[0][7] == "20");

    r = run_cli({"ep", "--species", "A", "--pair", "0,1", "--digits", "20"});
    REQUIRE(r.code == 0);
    rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(meta(r.out, "host_block") == "A+");
    CHECK(abs(Extended(rows[0][3]) / Extended("6.6094587620331389653") - 1) < Extended("1e-19"));
    CHECK(abs(Extended(rows[0][4]) / Extended("4.6995725311868146666") - 1) < Extended("1e-19"));

    r = run_cli({"ep", "--species", "EA", "--pair", "0,1", "--scan", "0:1"});
    CHECK(r.code == 0);
    CHECK(meta(r.out, "result") == "no exceptional point in range");
    CHECK(csv_rows(r.out).empty());
}

TEST_CASE("figure command") {
    auto r = run_cli({"figure", "--id", "1"});
    REQUIRE(r.code == 0);
    int low = 0, high = 0;
    std::string previous;
    double previous_e = -1e9;
    for (const auto& row : csv_rows(r.out)) {
        const double e = std::stod(row[0]);
        if (!previous.empty() && row[2] != previous) {
            if (previous_e >= 8.999 && e <= 9.001) ++low;
            if (previous_e >= 35.9 && e <= 36.1) ++high;
        }
        previous = row[2];
        previous_e = e;
    }
    CHECK(low == 2);
    CHECK(high == 2);

    r = run_cli({"figure", "--id", "2", "--lambda-max", "4"});
    REQUIRE(r.code == 0);
    const auto first = csv_rows(r.out).front();
    CHECK(first[0] == "0");
    CHECK(first[1] == "1");  // lowest E + lambda
    CHECK(first[5] == "0");  // lowest A + lambda

    const auto svg = std::filesystem::temp_directory_path() / "c3rotor_fig3_test.svg";
    r = run_cli({"figure", "--id", "3", "--plot", svg.string()});
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::file_size(svg) > 1000);
    std::filesystem::remove(svg);

    CHECK(run_cli({"figure", "--id", "4", "--g-max", "4", "--levels", "3"}).code == 0);
    CHECK(run_cli({"figure", "--id", "5"}).code == 1);
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args = {"spectrum", "--species", "EB", "--lambda", "3.7", "--levels", "6", "--format",
                                           "json"};
    CHECK(run_cli(args).out == run_cli(args).out);
    const std::vector<std::string> fig = {"figure", "--id", "3", "--g-max", "4"};
    CHECK(run_cli(fig).out == run_cli(fig).out);
}

TEST_CASE("JSON round-trips the in-memory results") {
    auto r = run_cli({"spectrum", "--species", "rawA", "--lambda", "0.1", "--levels", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    const auto s = solve_spectrum(SymmetrySpecies::RawA, real_barrier(0.1), 5, 1e-12);
    REQUIRE(doc["rows"].size() == 5);
    for (std::size_t j = 0; j < 5; ++j) CHECK(doc["rows"][j]["energy"].get<double>() == s[j]);
    CHECK(doc["meta"]["truncation"] == std::to_string(s.truncation_used));

    r = run_cli({"series", "--species", "EA", "--level", "1", "--order", "6", "--format", "json"});
    const auto series = rs_series(SymmetrySpecies::EA, 1, 6);
    const auto rows = json::parse(r.out)["rows"];
    for (std::size_t j = 0; j < series.coeffs.size(); ++j)
        CHECK(parse_rational(rows[j]["coefficient"].get<std::string>()) == series.coeffs[j]);

    r = run_cli({"spectrum", "--species", "A+", "--lambda", "0.1", "--levels", "2", "--precision", "30", "--format",
                 "json"});
    const auto ext = json::parse(r.out)["rows"][0]["energy"];
    REQUIRE(ext.is_string());
    const auto xs = solve_spectrum(SymmetrySpecies::APlus, real_barrier(Extended("0.1")), 2, Extended("1e-28"));
    CHECK(Extended(ext.get<std::string>()) == Extended(to_string(xs[0], 30)));
}

TEST_CASE("exit codes") {
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"spectrum"}).code == 1);
    CHECK(run_cli({"spectrum", "--species", "B", "--lambda", "1"}).code == 1);
    CHECK(run_cli({"spectrum", "--species", "A+", "--lambda", "abc"}).code == 1);
    CHECK(run_cli({"spectrum", "--species", "A+", "--lambda", "1", "--levels", "-2"}).code == 1);
    CHECK(run_cli({"spectrum", "--species", "A+", "--lambda", "1", "--format", "xml"}).code == 1);
    CHECK(run_cli({"bogus"}).code == 1);
    const auto r = run_cli({"spectrum", "--species", "A+", "--lambda", "1", "--tol", "1e-20"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unreachable") != std::string::npos);
}

TEST_CASE("config file supplies defaults that flags override") {
    const auto path = std::filesystem::temp_directory_path() / "c3rotor_cli_test.toml";
    {
        std::ofstream f(path);
        f << "[spectrum]\nlambda = 0.1\nlevels = 3\nspecies = \"EA\"\n";
    }
    auto r = run_cli({"--config", path.string(), "spectrum"});
    REQUIRE(r.code == 0);
    CHECK(meta(r.out, "lambda") == "0.1");
    CHECK(meta(r.out, "species") == "EA");
    CHECK(csv_rows(r.out).size() == 3);

    r = run_cli({"--config", path.string(), "spectrum", "--levels", "2", "--species", "A+"});
    REQUIRE(r.code == 0);
    CHECK(meta(r.out, "species") == "A+");
    CHECK(csv_rows(r.out).size() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("precision environment variable; flags win") {
    ScopedEnv env("C3ROTOR_PRECISION", "30");
    auto r = run_cli({"spectrum", "--species", "A+", "--lambda", "0.1", "--levels", "1"});
    REQUIRE(r.code == 0);
    CHECK(meta(r.out, "precision_digits") == "30");
    r = run_cli({"spectrum", "--species", "A+", "--lambda", "0.1", "--levels", "1", "--precision", "15"});
    REQUIRE(r.code == 0);
    CHECK(meta(r.out, "field") == "double");
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "c3rotor_cli_test.csv";
    const auto r = run_cli({"series", "--species", "A+", "--level", "0", "--order", "2", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream text;
    text << f.rdbuf();
    CHECK(csv_rows(text.str()).size() == 2);
    std::filesystem::remove(path);
}
