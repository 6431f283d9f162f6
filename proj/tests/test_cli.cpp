/*
   Copyright 2026 The cychom authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cychom/ainf.hpp"
#include "doctest.h"
#include "json.hpp"
#include "testkit.hpp"

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + CYCHOM_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> golden_cases() {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(read_file(std::filesystem::path(CYCHOM_GOLDEN_DIR) / "cases.txt"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto bar = line.find('|');
        out.emplace_back(line.substr(0, bar), line.substr(bar + 1));
    }
    return out;
}

struct CsvRow {
    int degree;
    std::size_t dim;
    bool stable;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "degree,dim,stable");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        const auto a = line.find(','), b = line.rfind(',');
        rows.push_back({std::stoi(line.substr(0, a)), std::stoul(line.substr(a + 1, b - a - 1)), line.substr(b + 1) == "true"});
    }
    return rows;
}

}  // namespace

TEST_CASE("golden outputs are reproduced byte for byte") {
    for (const auto& [name, args] : golden_cases()) {
        INFO(name << ": " << args);
        const auto r = run_cli(args);
        CHECK(r.code == 0);
        CHECK(r.out == read_file(std::filesystem::path(CYCHOM_GOLDEN_DIR) / name));
    }
}

TEST_CASE("output does not depend on the thread count") {
    for (const std::string args : {"hh --builtin truncated_poly --p 5 --L 5", "zp --builtin dual_numbers --p 3 --L 3 --N 2",
                                   "selftest --suite gysin --seed 3"}) {
        INFO(args);
        const auto one = run_cli(args, "CYCHOM_THREADS=1");
        const auto many = run_cli(args, "CYCHOM_THREADS=4");
        CHECK(one.code == 0);
        CHECK(one.out == many.out);
        CHECK(one.out == run_cli(args, "CYCHOM_THREADS=4").out);
    }
}

TEST_CASE("Hochschild tables agree with the Koszul resolution oracle") {
    for (auto [name, p, m] : {std::tuple{"hh_dual_numbers.csv", 3u, 2}, std::tuple{"hh_truncated_poly_p5.csv", 5u, 3}}) {
        const auto oracle = testkit::koszul_hh_truncated_poly(p, m, 12);
        const auto rows = parse_csv(read_file(std::filesystem::path(CYCHOM_GOLDEN_DIR) / name));
        int stable = 0;
        for (const auto& row : rows) {
            if (!row.stable) continue;
            ++stable;
            INFO(name << " degree " << row.degree);
            CHECK(row.dim == oracle.at(row.degree));
        }
        CHECK(stable >= 4);
    }
}

TEST_CASE("algebra files are read like built-ins") {
    const auto path = std::filesystem::temp_directory_path() / "cychom_test_dual_numbers.json";
    {
        std::ofstream out(path);
        out << cychom::algebra_to_json(cychom::builtin_algebra({"dual_numbers", 3, 0}));
    }
    const auto from_file = run_cli("hh --algebra " + path.string() + " --L 4 --format csv");
    const auto builtin = run_cli("hh --builtin dual_numbers --p 3 --L 4 --format csv");
    CHECK(from_file.code == 0);
    CHECK(from_file.out == builtin.out);
    CHECK(run_cli("hh --algebra " + path.string() + " --p 5").code == 2);
    {
        std::ofstream out(path);
        out << "{\"p\": 3, \"basis\": [";
    }
    CHECK(run_cli("hh --algebra " + path.string()).code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("JSON output carries rows, variables and status") {
    const auto r = run_cli("prop15 --builtin ground_field --p 3 --L 4 --N 3 --format json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "PASS");
    CHECK(j["variables"].contains("t"));
    CHECK(j["variables"].contains("theta"));
    CHECK(j["rows"].size() >= 4);
    for (const auto& row : j["rows"]) CHECK(row["agree"] == true);
    const auto cyc = nlohmann::json::parse(run_cli("cyclic --builtin ground_field --L 3 --N 2 --format json").out);
    CHECK(cyc["variables"].contains("t"));
    CHECK(cyc["rows"][0].contains("stable"));
}

TEST_CASE("exit codes") {
    CHECK(run_cli("prop15 --builtin mu3_witness --p 3 --L 4 --N 3").code == 1);
    CHECK(run_cli("hh --builtin no_such_algebra").code == 2);
    CHECK(run_cli("hh --unknown-flag").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("hh --format xml").code == 2);
    CHECK(run_cli("hh --window 3").code == 2);
    CHECK(run_cli("selftest --suite nothing").code == 2);
    CHECK(run_cli("hh --L 9").code == 3);
    CHECK(run_cli("cyclic --N 7").code == 3);
    CHECK(run_cli("zp --p 11").code == 3);
    CHECK(run_cli("assoc-cells --L 8").code == 3);
    CHECK(run_cli("lambda-hom --L 7").code == 3);
    CHECK(run_cli("--help").code == 0);
}
