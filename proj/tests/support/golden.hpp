#pragma once

// Golden-file comparison for the CLI's JSON records. A golden file holds
// {"args": [...], "exit_code": n, "output": {...}}; numbers compare with a
// relative tolerance, everything else exactly.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_app.hpp"

namespace golden {

using json = nlohmann::json;

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliRun run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    CliRun r;
    r.code = logderiv::cli::run_command(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct Case {
    std::string name;
    std::vector<std::string> args;
    int exit_code = 0;
    json output;
};

// keeps gtest from dumping the raw bytes into test names
inline void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

inline std::vector<Case> load(const std::filesystem::path& dir)
{
    std::vector<Case> cases;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        const json doc = json::parse(in);
        cases.push_back({entry.path().stem().string(), doc.at("args").get<std::vector<std::string>>(),
                         doc.at("exit_code").get<int>(), doc.at("output")});
    }
    std::sort(cases.begin(), cases.end(), [](const Case& a, const Case& b) { return a.name < b.name; });
    return cases;
}

inline void compare(const json& actual, const json& expected, const std::string& path, double rel_tol,
                    std::vector<std::string>& problems)
{
    if (expected.is_number() && actual.is_number()) {
        const double a = actual.get<double>();
        const double e = expected.get<double>();
        if (!(std::abs(a - e) <= rel_tol * std::max(1.0, std::abs(e))))
            problems.push_back(path + ": " + actual.dump() + " != " + expected.dump());
        return;
    }
    if (actual.type() != expected.type()) {
        problems.push_back(path + ": type " + actual.type_name() + " != " + expected.type_name());
        return;
    }
    if (expected.is_object()) {
        for (auto it = expected.begin(); it != expected.end(); ++it) {
            if (!actual.contains(it.key())) problems.push_back(path + "." + it.key() + ": missing");
            else compare(actual.at(it.key()), it.value(), path + "." + it.key(), rel_tol, problems);
        }
        for (auto it = actual.begin(); it != actual.end(); ++it)
            if (!expected.contains(it.key())) problems.push_back(path + "." + it.key() + ": unexpected");
        return;
    }
    if (expected.is_array()) {
        if (actual.size() != expected.size()) {
            problems.push_back(path + ": length " + std::to_string(actual.size()) + " != " +
                               std::to_string(expected.size()));
            return;
        }
        for (std::size_t i = 0; i < expected.size(); ++i)
            compare(actual[i], expected[i], path + "[" + std::to_string(i) + "]", rel_tol, problems);
        return;
    }
    if (actual != expected) problems.push_back(path + ": " + actual.dump() + " != " + expected.dump());
}

/// Checks the stable keys of a CLI record.
inline std::vector<std::string> schema_problems(const json& rec)
{
    std::vector<std::string> p;
    for (const char* key : {"command", "inputs", "result", "diagnostics"})
        if (!rec.contains(key)) p.push_back(std::string("missing ") + key);
    if (!p.empty()) return p;
    if (!rec["command"].is_string()) p.push_back("command is not a string");
    if (!rec["inputs"].is_object()) p.push_back("inputs is not an object");
    if (!rec["diagnostics"].is_object()) p.push_back("diagnostics is not an object");
    const json& result = rec["result"];
    const std::string kind = result.value("kind", "");
    if (kind == "scalar") {
        if (!result.contains("value") || !result["value"].is_number()) p.push_back("scalar without numeric value");
    } else if (kind == "logseries") {
        if (!result.contains("parts") || !result["parts"].is_object()) {
            p.push_back("logseries without parts");
        } else {
            for (auto it = result["parts"].begin(); it != result["parts"].end(); ++it) {
                const std::string& k = it.key();
                if (k.empty() || !std::all_of(k.begin(), k.end(), [](char c) { return c >= '0' && c <= '9'; }))
                    p.push_back("part key is not an integer: " + k);
                const json& part = it.value();
                if (!part.contains("e_min") || !part["e_min"].is_number_integer()) p.push_back("part without e_min");
                if (!part.contains("coeffs") || !part["coeffs"].is_array()) p.push_back("part without coeffs");
                else
                    for (const auto& c : part["coeffs"])
                        if (!c.is_number()) p.push_back("non-numeric coefficient");
            }
        }
    } else if (kind == "table") {
        if (!result.contains("columns") || !result.contains("rows")) p.push_back("table without columns/rows");
    } else {
        p.push_back("unknown result kind '" + kind + "'");
    }
    return p;
}

/// Empty when the case reproduces; otherwise one line per mismatch.
inline std::vector<std::string> check(const Case& c, double rel_tol = 1e-9)
{
    std::vector<std::string> problems;
    const CliRun r = run(c.args);
    if (r.code != c.exit_code)
        problems.push_back("exit code " + std::to_string(r.code) + " != " + std::to_string(c.exit_code) + " " + r.err);
    json actual;
    try {
        actual = json::parse(r.out);
    } catch (const json::parse_error& e) {
        problems.push_back(std::string("stdout is not JSON: ") + e.what());
        return problems;
    }
    for (auto& s : schema_problems(actual)) problems.push_back("schema: " + s);
    compare(actual, c.output, "$", rel_tol, problems);
    return problems;
}

} // namespace golden
