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


// Command-line front end: homology tables and verification reports.
//
// Exit status: 0 all requested checks pass, 1 a check fails, 2 bad input,
// 3 a size guard is exceeded.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cychom/ainf.hpp"
#include "cychom/associahedron.hpp"
#include "cychom/cyccat.hpp"
#include "cychom/cycmod.hpp"
#include "cychom/gysin.hpp"
#include "cychom/hochschild.hpp"
#include "json.hpp"

using namespace cychom;
using json = nlohmann::ordered_json;

namespace {

struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string builtin;
    std::string algebra_file;
    int p = 3;
    bool p_given = false;
    int L = 4;
    int N = 3;
    int x_degree = 0;
    int m = 3;
    std::string window;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::string suite = "all";
};

// One report: metadata, a table, optional check lines and a verdict.
struct Report {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::pair<std::string, std::string>> variables;  // name -> meaning
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
    std::optional<bool> passed;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

void print(const Report& r, const std::string& format, std::ostream& os) {
    if (format == "json") {
        json j;
        for (const auto& [k, v] : r.meta) j[k] = v;
        json vars = json::object();
        for (const auto& [k, v] : r.variables) vars[k] = v;
        j["variables"] = vars;
        json rows = json::array();
        for (const auto& row : r.rows) {
            json o;
            for (std::size_t i = 0; i < r.columns.size(); ++i) {
                const auto& c = row[i];
                if (c == "true" || c == "false")
                    o[r.columns[i]] = c == "true";
                else if (!c.empty() && (std::isdigit(static_cast<unsigned char>(c[0])) ||
                                        (c[0] == '-' && c.size() > 1 && std::isdigit(static_cast<unsigned char>(c[1])))) &&
                         c.find_first_not_of("-0123456789") == std::string::npos)
                    o[r.columns[i]] = std::stoll(c);
                else
                    o[r.columns[i]] = c;
            }
            rows.push_back(o);
        }
        j["rows"] = rows;
        if (!r.notes.empty()) j["notes"] = r.notes;
        if (r.passed) j["status"] = *r.passed ? "PASS" : "FAIL";
        os << j.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
        os << "\n";
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
        return;
    }
    for (const auto& [k, v] : r.meta) os << "# " << k << ": " << v << "\n";
    for (const auto& [k, v] : r.variables) os << "# variable " << k << ": " << v << "\n";
    std::vector<std::size_t> width(r.columns.size());
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        width[i] = r.columns[i].size();
        for (const auto& row : r.rows) width[i] = std::max(width[i], row[i].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::ostringstream ss;
        for (std::size_t i = 0; i < cells.size(); ++i)
            ss << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
        std::string text = ss.str();
        text.erase(text.find_last_not_of(' ') + 1);
        os << text << "\n";
    };
    if (!r.columns.empty()) line(r.columns);
    for (const auto& row : r.rows) line(row);
    for (const auto& n : r.notes) os << n << "\n";
    if (r.passed) os << (*r.passed ? "PASS" : "FAIL") << "\n";
}

std::optional<DegreeWindow> parse_window(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos) throw InputError("");
        std::size_t a = 0, b = 0;
        const int lo = std::stoi(s.substr(0, colon), &a);
        const int hi = std::stoi(s.substr(colon + 1), &b);
        if (a != colon || b != s.size() - colon - 1) throw InputError("");
        return DegreeWindow{lo, hi};
    } catch (const std::exception&) {
        throw InputError("--window expects lo:hi, got '" + s + "'");
    }
}

void homology_rows(Report& r, const ChainComplex& c, const RunConfig& cfg) {
    const auto range = parse_window(cfg.window);
    const auto h = homology(c, range.value_or(DegreeWindow{}));
    r.columns = {"degree", "dim", "stable"};
    for (const auto& row : h.rows) r.rows.push_back({std::to_string(row.degree), std::to_string(row.dim), yes_no(row.stable)});
    const auto w = c.window();
    r.meta.emplace_back("stable window", w.empty() ? "none" : "[" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
}

struct LoadedAlgebra {
    std::string label;
    AInfAlgebra algebra;
};

LoadedAlgebra load_algebra(const RunConfig& cfg) {
    if (!cfg.builtin.empty() && !cfg.algebra_file.empty()) throw InputError("give either --builtin or --algebra, not both");
    if (!cfg.algebra_file.empty()) {
        std::ifstream in(cfg.algebra_file);
        if (!in) throw InputError("cannot read " + cfg.algebra_file);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            auto a = algebra_from_json(ss.str());
            if (cfg.p_given && static_cast<int>(a.field().p()) != cfg.p)
                throw InputError("--p " + std::to_string(cfg.p) + " differs from the file's p = " + std::to_string(a.field().p()));
            return {cfg.algebra_file, std::move(a)};
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(std::string("algebra file: ") + e.what());
        }
    }
    const std::string name = cfg.builtin.empty() ? "ground_field" : cfg.builtin;
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw InputError("unknown builtin '" + name + "'");
    BuiltinSpec spec{name, static_cast<std::uint32_t>(cfg.p), cfg.x_degree, cfg.m};
    std::string label = name;
    if (name == "dual_numbers" || name == "truncated_poly") label += "(|x|=" + std::to_string(cfg.x_degree) + ")";
    if (name == "truncated_poly") label += "(m=" + std::to_string(cfg.m) + ")";
    return {label, builtin_algebra(spec)};
}

void check_guards(const RunConfig& cfg) {
    if (cfg.L < 0 || cfg.L > 8) throw GuardError("--L must lie in 0..8");
    if (cfg.N < 0 || cfg.N > 6) throw GuardError("--N must lie in 0..6");
    if (cfg.p != 3 && cfg.p != 5 && cfg.p != 7) throw GuardError("--p must be 3, 5 or 7");
}

void common_meta(Report& r, const RunConfig& cfg, const std::string& algebra) {
    r.meta.emplace_back("command", cfg.command);
    if (!algebra.empty()) r.meta.emplace_back("algebra", algebra);
    r.meta.emplace_back("p", std::to_string(cfg.p));
    r.meta.emplace_back("L", std::to_string(cfg.L));
}

Report run_homology(const RunConfig& cfg) {
    auto [label, a] = load_algebra(cfg);
    const int p = static_cast<int>(a.field().p());
    Report r;
    RunConfig shown = cfg;
    shown.p = p;
    common_meta(r, shown, label);
    if (cfg.command == "hh") {
        homology_rows(r, *hochschild_complex(a, {cfg.L}), cfg);
    } else if (cfg.command == "pfold") {
        if (a.field().p() != static_cast<std::uint32_t>(cfg.p) && cfg.p_given)
            throw InputError("--p differs from the algebra's field");
        homology_rows(r, *pfold_complex(a, p, {cfg.L}).complex, cfg);
    } else if (cfg.command == "cyclic") {
        r.meta.emplace_back("N", std::to_string(cfg.N));
        r.variables = {{"t", "degree 2, the circle parameter; powers up to t^N"}};
        homology_rows(r, *negative_cyclic_complex(a, {cfg.L}, cfg.N).complex(), cfg);
    } else {
        r.meta.emplace_back("N", std::to_string(cfg.N));
        r.variables = {{"t", "degree 2; powers up to t^N"}, {"theta", "degree 1, theta^2 = 0"}};
        homology_rows(r, *zp_equivariant_complex(a, p, {cfg.L}, cfg.N).complex(), cfg);
    }
    return r;
}

Report run_lambda_hom(const RunConfig& cfg) {
    if (cfg.L > 6) throw GuardError("lambda-hom enumerates objects up to [6]; --L must be at most 6");
    Report r;
    r.meta.emplace_back("command", cfg.command);
    r.meta.emplace_back("L", std::to_string(cfg.L));
    r.columns = {"source", "target", "morphisms", "surjective", "automorphisms"};
    bool ok = true;
    for (int n = 0; n <= cfg.L; ++n)
        for (int m = 0; m <= cfg.L; ++m) {
            const auto all = enumerate_hom(n, m);
            const auto surj = enumerate_hom(n, m, true);
            std::string aut = "-";
            if (n == m) {
                std::size_t count = 0;
                for (const auto& f : surj)
                    if (f.is_automorphism()) ++count;
                aut = std::to_string(count);
                ok = ok && count == static_cast<std::size_t>(n + 1);
            }
            r.rows.push_back({std::to_string(n), std::to_string(m), std::to_string(all.size()), std::to_string(surj.size()), aut});
        }
    r.notes.push_back("check: |Aut([n])| = n + 1");
    r.passed = ok;
    return r;
}

Report run_assoc_cells(const RunConfig& cfg) {
    Report r;
    r.meta.emplace_back("command", cfg.command);
    r.meta.emplace_back("L", std::to_string(cfg.L));
    r.columns = {"leaves", "cell_degree", "cells"};
    const PrimeField F(static_cast<std::uint32_t>(cfg.p));
    bool ok = true;
    for (int d = 1; d <= cfg.L; ++d) {
        const auto cells = enumerate_cells(d);  // throws out_of_range past 7 leaves
        for (const auto& [deg, trees] : cells) {
            r.rows.push_back({std::to_string(d), std::to_string(deg), std::to_string(trees.size())});
            for (const auto& t : trees)
                if (!boundary(boundary(t, F)).is_zero()) {
                    ok = false;
                    r.notes.push_back("boundary squared is nonzero on " + t.to_string());
                }
        }
    }
    r.notes.push_back("check: boundary squared vanishes on every cell");
    r.passed = ok;
    return r;
}

void add_check(Report& r, bool& ok, const std::string& name, const CheckReport& c) {
    r.rows.push_back({name, c.ok ? "PASS" : "FAIL", c.detail});
    ok = ok && c.ok;
}

Report run_gysin(const RunConfig& cfg) {
    Report r;
    r.meta.emplace_back("command", cfg.command);
    r.meta.emplace_back("p", std::to_string(cfg.p));
    r.meta.emplace_back("N", std::to_string(cfg.N));
    r.variables = {{"t", "degree 2"}, {"theta", "degree 1"}, {"t~", "degree -2"}, {"theta~", "degree -1"}};
    r.columns = {"check", "result", "detail"};
    bool ok = true;
    auto run = [&](const std::string& name, const TauSigmaComplex& x) {
        const auto g = gysin_maps(x, cfg.N);
        add_check(r, ok, name + " phi", g.phi_report);
        add_check(r, ok, name + " phi~", g.phi_tilde_report);
    };
    run("trivial", trivial_module(cfg.p));
    run("circle", circle_model(cfg.p));
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < 3; ++i) run("random" + std::to_string(i), random_tau_sigma_complex(cfg.p, rng, 8));
    add_check(r, ok, "naturality", check_gysin_naturality(polynomial_endomorphism(circle_model(cfg.p), 2, 1), cfg.N));
    r.passed = ok;
    return r;
}

Report run_prop15(const RunConfig& cfg) {
    auto [label, a] = load_algebra(cfg);
    const int p = static_cast<int>(a.field().p());
    const auto rep = prop15_report(a, p, cfg.L, cfg.N);
    Report r;
    RunConfig shown = cfg;
    shown.p = p;
    common_meta(r, shown, label);
    r.meta.emplace_back("N", std::to_string(cfg.N));
    r.meta.emplace_back("cohomologically unital", yes_no(rep.cohomologically_unital));
    r.meta.emplace_back("stable window", rep.window.empty() ? "none"
                                                            : "[" + std::to_string(rep.window.lo) + ", " +
                                                                  std::to_string(rep.window.hi) + "]");
    r.variables = {{"t", "degree 2"}, {"theta", "degree 1"}};
    r.columns = {"degree", "zp_dim", "circle_dim", "circle_theta_dim", "agree"};
    for (const auto& row : rep.rows)
        r.rows.push_back({std::to_string(row.degree), std::to_string(row.zp_dim), std::to_string(row.circle_dim),
                          std::to_string(row.circle_theta_dim), yes_no(row.agree())});
    if (!rep.note.empty()) r.notes.push_back(rep.note);
    r.passed = rep.passed();
    return r;
}

CheckReport d_squared(const ChainComplex& c) {
    if (auto v = find_d_squared_violation(c)) return {false, "d^2 != 0 on " + v->element, v};
    return {true, "", std::nullopt};
}

Report run_selftest(const RunConfig& cfg) {
    const std::vector<std::string> suites{"signs", "zp", "gysin", "all"};
    if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end())
        throw InputError("unknown suite '" + cfg.suite + "' (signs, zp, gysin, all)");
    Report r;
    r.meta.emplace_back("command", cfg.command);
    r.meta.emplace_back("suite", cfg.suite);
    r.meta.emplace_back("p", std::to_string(cfg.p));
    r.meta.emplace_back("seed", std::to_string(cfg.seed));
    r.columns = {"check", "result", "detail"};
    bool ok = true;
    const auto p = static_cast<std::uint32_t>(cfg.p);
    const bool all = cfg.suite == "all";
    const int L = std::min(cfg.L, 3);
    if (all || cfg.suite == "signs") {
        for (const auto& name : builtin_names()) {
            const auto a = builtin_algebra({name, p});
            add_check(r, ok, name + " hochschild", d_squared(*hochschild_complex(a, {L})));
            add_check(r, ok, name + " bar", d_squared(*bar_complex(a, {L})));
            add_check(r, ok, name + " negative cyclic", d_squared(*negative_cyclic_complex(a, {L}, 2).complex()));
            add_check(r, ok, name + " pfold", d_squared(*pfold_complex(a, cfg.p, {1}).complex));
            add_check(r, ok, name + " zp", d_squared(*zp_equivariant_complex(a, cfg.p, {1}, 2).complex()));
            auto q = hochschild_functor(a, L + 1);
            add_check(r, ok, name + " module relations", check_module_relations(*q, std::min(L, 2)));
            add_check(r, ok, name + " cyclic bar", d_squared(*bar_totalization(*q, BarVariant::cyclic_bar, L).complex));
            add_check(r, ok, name + " positive cocyclic",
                      d_squared(*cobar_totalization(*dual_module(q), CobarVariant::positive_cocyclic, L, 2).complex));
        }
    }
    if (all || cfg.suite == "zp") {
        for (const auto& name : builtin_names()) {
            const auto a = builtin_algebra({name, p});
            const auto pf = pfold_complex(a, cfg.p, {L - 1});
            add_check(r, ok, name + " tau chain map", verify_chain_map(pf.tau));
            const bool order = operators_equal(operator_power(pf.tau, cfg.p), operator_identity(pf.complex));
            add_check(r, ok, name + " tau^p = 1", {order, order ? "" : "tau^p differs from the identity", std::nullopt});
        }
    }
    if (all || cfg.suite == "gysin") {
        std::mt19937_64 rng(cfg.seed);
        std::vector<std::pair<std::string, TauSigmaComplex>> modules{{"trivial", trivial_module(cfg.p)},
                                                                     {"circle", circle_model(cfg.p)}};
        for (int i = 0; i < 5; ++i) modules.emplace_back("random" + std::to_string(i), random_tau_sigma_complex(cfg.p, rng, 8));
        for (const auto& [name, x] : modules) {
            const auto g = gysin_maps(x, std::min(cfg.N, 3));
            add_check(r, ok, name + " phi", g.phi_report);
            add_check(r, ok, name + " phi~", g.phi_tilde_report);
        }
    }
    r.passed = ok;
    return r;
}

int run(const RunConfig& cfg, std::ostream& os) {
    check_guards(cfg);
    Report r;
    if (cfg.command == "hh" || cfg.command == "pfold" || cfg.command == "cyclic" || cfg.command == "zp")
        r = run_homology(cfg);
    else if (cfg.command == "lambda-hom")
        r = run_lambda_hom(cfg);
    else if (cfg.command == "assoc-cells")
        r = run_assoc_cells(cfg);
    else if (cfg.command == "gysin")
        r = run_gysin(cfg);
    else if (cfg.command == "prop15")
        r = run_prop15(cfg);
    else
        r = run_selftest(cfg);
    print(r, cfg.format, os);
    return r.passed.value_or(true) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cychom: Hochschild, cyclic and Z/p-equivariant homology over F_p"};
    RunConfig cfg;
    const std::vector<std::string> commands{"hh",     "pfold",  "cyclic", "zp",      "lambda-hom",
                                            "assoc-cells", "gysin", "prop15", "selftest"};
    app.add_option("command", cfg.command, "hh, pfold, cyclic, zp, lambda-hom, assoc-cells, gysin, prop15, selftest")
        ->required()
        ->check(CLI::IsMember(commands));
    app.add_option("--builtin", cfg.builtin, "built-in algebra name");
    app.add_option("--algebra", cfg.algebra_file, "algebra description file (JSON)");
    auto* p_opt = app.add_option("--p", cfg.p, "prime, 3, 5 or 7");
    app.add_option("--L", cfg.L, "word length truncation (<= 8)");
    app.add_option("--N", cfg.N, "power series truncation (<= 6)");
    app.add_option("--x-degree", cfg.x_degree, "generator degree for dual_numbers and truncated_poly");
    app.add_option("--m", cfg.m, "truncated_poly: k[x]/x^m");
    app.add_option("--window", cfg.window, "reported degrees lo:hi");
    app.add_option("--format", cfg.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--seed", cfg.seed, "seed for randomized suites");
    app.add_option("--suite", cfg.suite, "selftest suite: signs, zp, gysin, all");
    app.allow_windows_style_options(false);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.p_given = p_opt->count() > 0;

    std::ostringstream out;
    try {
        const int code = run(cfg, out);
        std::cout << out.str();
        return code;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const std::out_of_range& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const SignConventionError& e) {
        std::cerr << "check failed: " << e.what() << " at " << e.violation().element << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    }
}
