#pragma once

// Command dispatch for the logderiv CLI. Kept out of main() so the tests can
// drive it with captured streams.
//
// Exit codes: 0 success, 2 usage/parse error, 3 numerical non-convergence or a
// failed check, 4 domain error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logderiv/error.hpp"
#include "logderiv/expr.hpp"
#include "logderiv/fracdiff.hpp"
#include "logderiv/logop.hpp"
#include "logderiv/quad.hpp"
#include "logderiv/series.hpp"
#include "logderiv/specfun.hpp"
#include "logderiv/umbral.hpp"

namespace logderiv::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kDomain = 4 };

inline constexpr double kDefaultTol = 1e-10;
inline constexpr const char* kTruncOrderEnv = "LOGDERIV_TRUNC_ORDER";

/// One command's output before rendering as text or JSON.
struct OutputRecord {
    std::string command;
    json inputs = json::object();
    json result = json::object();
    json diagnostics = json::object();
    std::vector<std::string> text;  // human-readable lines
    bool passed = true;             // every reported delta within its tolerance
    std::string failure;

    json to_json() const
    {
        json out;
        out["command"] = command;
        out["inputs"] = inputs;
        out["result"] = result;
        out["diagnostics"] = diagnostics;
        return out;
    }
};

namespace detail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline json series_json(const LaurentSeries& q)
{
    json out;
    out["e_min"] = q.e_min();
    out["coeffs"] = q.coeffs();
    return out;
}

inline json logseries_json(const LogSeries& f)
{
    json out;
    out["kind"] = "logseries";
    json parts = json::object();
    for (int k = 0; k <= kMaxLnPower; ++k) {
        if (k > 0 && f.part(k).is_zero()) continue;
        parts[std::to_string(k)] = series_json(f.part(k));
    }
    out["parts"] = parts;
    out["text"] = render(f);
    return out;
}

inline json scalar_json(double v)
{
    json out;
    out["kind"] = "scalar";
    out["value"] = v;
    return out;
}

inline SeriesConfig config_from_env()
{
    SeriesConfig config;
    if (const char* raw = std::getenv(kTruncOrderEnv); raw != nullptr && *raw != '\0') {
        const std::string text(raw);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw CLI::ValidationError(kTruncOrderEnv, "not an integer: " + text);
        config.trunc_order = value;
    }
    config.validate();
    return config;
}

struct Params {
    bool json_out = false;
    double tol = kDefaultTol;
    std::string expr;
    std::optional<double> at;
    double nu = 0.0;
    double x = 0.0;
    int n = 0;
    double alpha = 0.0;
    int panels = quad::BesselLogOptions{}.panel_budget;
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

inline OutputRecord cmd_apply_logd(const Params& p, const SeriesConfig& config)
{
    OutputRecord rec;
    rec.command = "apply logd";
    rec.inputs["expr"] = p.expr;
    if (p.at) rec.inputs["at"] = *p.at;
    rec.inputs["tol"] = p.tol;
    rec.inputs["trunc_order"] = config.trunc_order;

    const auto ast = expr::parse_expr(p.expr, config.trunc_order);
    const FracOperand operand = expr::to_operand(ast, config);
    LogSeries input(operand.power);
    if (operand.ln_coeff != 0.0) input.set_part(1, LaurentSeries::constant(operand.ln_coeff));
    const LogOpResult image = log_deriv(input);
    rec.result = logseries_json(image.result);
    rec.diagnostics["truncated"] = image.truncated;
    rec.text.push_back("ln d/dx [" + expr::render(ast) + "] = " + render(image.result));
    if (image.truncated) rec.text.push_back("(series truncated at order " + std::to_string(config.trunc_order) + ")");

    if (p.at) {
        const double x = *p.at;
        const double value = evaluate(image.result, x, config);
        const LimitEstimate limit = numeric_log_limit(operand, x);
        const double delta = std::abs(value - limit.value);
        const double check_tol = std::max(p.tol, 10.0 * limit.err_estimate);
        rec.diagnostics["value"] = value;
        rec.diagnostics["limit"] = limit.value;
        rec.diagnostics["limit_err_estimate"] = limit.err_estimate;
        rec.diagnostics["delta"] = delta;
        rec.diagnostics["check_tol"] = check_tol;
        rec.text.push_back(fmt(value));
        rec.text.push_back("limit check: " + fmt(limit.value) + " (err_estimate " + fmt(limit.err_estimate) +
                           ", delta " + fmt(delta) + ")");
        if (!(delta <= check_tol)) {
            rec.passed = false;
            rec.failure = "closed form and nu-limit differ by " + fmt(delta);
        }
    }
    return rec;
}

inline OutputRecord cmd_fracdiff(const Params& p, const SeriesConfig& config)
{
    OutputRecord rec;
    rec.command = "fracdiff";
    rec.inputs["expr"] = p.expr;
    rec.inputs["nu"] = p.nu;
    rec.inputs["at"] = *p.at;
    rec.inputs["tol"] = p.tol;
    rec.inputs["trunc_order"] = config.trunc_order;

    const auto ast = expr::parse_expr(p.expr, config.trunc_order);
    const FracOperand operand = expr::to_operand(ast, config);
    const double value = frac_deriv_value(operand, p.nu, *p.at);
    rec.result = scalar_json(value);
    rec.diagnostics["sigma"] = p.nu;
    rec.diagnostics["truncated"] = operand.power.truncated();
    rec.text.push_back("d^" + fmt(p.nu) + "/dx^" + fmt(p.nu) + " [" + expr::render(ast) + "] at x = " + fmt(*p.at) +
                       ": " + fmt(value));
    return rec;
}

inline OutputRecord cmd_verify_k0(const Params& p, const SeriesConfig& config)
{
    OutputRecord rec;
    rec.command = "verify k0";
    rec.inputs["x"] = p.x;
    rec.inputs["tol"] = p.tol;
    rec.inputs["trunc_order"] = config.trunc_order;

    const umbral::IdentityReport report = umbral::k0_identity_check(p.x, p.tol, config);
    rec.result = scalar_json(report.lhs);
    rec.diagnostics["x"] = report.x;
    rec.diagnostics["lhs"] = report.lhs;
    rec.diagnostics["rhs"] = report.rhs;
    rec.diagnostics["abs_diff"] = report.abs_diff;
    rec.diagnostics["terms_used"] = report.terms_used;
    rec.diagnostics["truncation_insufficient"] = report.truncation_insufficient;
    rec.text.push_back("[ln d/dx + ln(2 sqrt(x))] I0(sqrt(x)) at x = " + fmt(p.x) + ": " + fmt(report.lhs));
    rec.text.push_back("K0(sqrt(x)) oracle: " + fmt(report.rhs) + "  |diff| = " + fmt(report.abs_diff));
    if (report.truncation_insufficient) rec.text.push_back("warning: trunc_order may be too low for this x");
    if (!(report.abs_diff <= p.tol)) {
        rec.passed = false;
        rec.failure = "identity residual " + fmt(report.abs_diff) + " exceeds tol";
    }
    return rec;
}

inline OutputRecord cmd_verify_commutator(const Params& p)
{
    OutputRecord rec;
    rec.command = "verify commutator";
    rec.inputs["n"] = p.n;
    rec.inputs["tol"] = p.tol;

    const LogSeries residual = commutator_on_monomial(p.n);
    const LogSeries expected = p.n == 0 ? LogSeries(LaurentSeries::monomial(1.0, -1)) : LogSeries{};
    const LogSeries diff = linear_combine(1.0, residual, -1.0, expected);
    double delta = 0.0;
    for (int k = 0; k <= kMaxLnPower; ++k)
        for (double c : diff.part(k).coeffs()) delta = std::max(delta, std::abs(c));
    rec.result = logseries_json(residual);
    rec.diagnostics["expected"] = render(expected);
    rec.diagnostics["delta"] = delta;
    rec.text.push_back("[ln d/dx, d/dx] x^" + std::to_string(p.n) + " = " + render(residual));
    rec.text.push_back("expected " + render(expected) + "  max coefficient residual " + fmt(delta));
    if (!(delta <= p.tol)) {
        rec.passed = false;
        rec.failure = "commutator residual " + fmt(delta) + " exceeds tol";
    }
    return rec;
}

inline OutputRecord cmd_verify_dalpha(const Params& p)
{
    OutputRecord rec;
    rec.command = "verify dalpha";
    rec.inputs["alpha"] = p.alpha;
    rec.inputs["x"] = p.x;
    rec.inputs["tol"] = p.tol;

    const double closed = umbral::dbessel_dalpha(p.alpha, p.x);
    // five-point central difference in the order
    constexpr double h = 1e-3;
    auto j = [&p](double a) { return umbral::bessel_via_umbral(a, p.x); };
    const double oracle = (-j(p.alpha + 2 * h) + 8 * j(p.alpha + h) - 8 * j(p.alpha - h) + j(p.alpha - 2 * h)) / (12 * h);
    const double delta = std::abs(closed - oracle);
    rec.result = scalar_json(closed);
    rec.diagnostics["finite_difference"] = oracle;
    rec.diagnostics["h"] = h;
    rec.diagnostics["delta"] = delta;
    rec.text.push_back("dJ/dalpha at alpha = " + fmt(p.alpha) + ", x = " + fmt(p.x) + ": " + fmt(closed));
    rec.text.push_back("finite difference: " + fmt(oracle) + "  delta " + fmt(delta));
    if (!(delta <= p.tol)) {
        rec.passed = false;
        rec.failure = "series and finite difference differ by " + fmt(delta);
    }
    return rec;
}

inline OutputRecord cmd_integral_b(const Params& p)
{
    OutputRecord rec;
    rec.command = "integral B";
    rec.inputs["alpha"] = p.alpha;
    rec.inputs["tol"] = p.tol;
    rec.inputs["panels"] = p.panels;

    const double closed = umbral::bessel_log_integral_closed(p.alpha);
    quad::BesselLogOptions options;
    options.panel_budget = p.panels;
    const quad::QuadReport q = quad::integrate_bessel_log(p.alpha, p.tol, options);
    const double delta = std::abs(q.value - closed);
    rec.result = scalar_json(closed);
    rec.diagnostics["closed"] = closed;
    rec.diagnostics["quad"] = q.value;
    rec.diagnostics["err_estimate"] = q.err_estimate;
    rec.diagnostics["segments"] = q.segments;
    rec.diagnostics["accel_rounds"] = q.accel_rounds;
    rec.diagnostics["delta"] = delta;
    rec.text.push_back("closed " + fmt(closed) + "  quad " + fmt(q.value) + " +- " + fmt(q.err_estimate) + "  (" +
                       std::to_string(q.segments) + " panels)");
    if (!(delta <= std::max(p.tol, q.err_estimate))) {
        rec.passed = false;
        rec.failure = "quadrature and closed form differ by " + fmt(delta);
    }
    return rec;
}

inline OutputRecord cmd_table_digamma(const Params& p)
{
    OutputRecord rec;
    rec.command = "table digamma";
    rec.inputs["from"] = p.from;
    rec.inputs["to"] = p.to;
    rec.inputs["step"] = p.step;

    if (!(p.step > 0.0) || !(p.to >= p.from)) throw domain_error("table digamma: requires step > 0 and to >= from");
    const double count = std::floor((p.to - p.from) / p.step + 1e-9) + 1.0;
    if (count > 100000) throw domain_error("table digamma: more than 100000 rows");
    json rows = json::array();
    for (int i = 0; i < static_cast<int>(count); ++i) {
        const double x = p.from + i * p.step;
        json row = json::array({x, nullptr});
        std::string cell = "pole";
        try {
            const double v = specfun::digamma(x);
            row[1] = v;
            cell = fmt(v);
        } catch (const pole_error&) {
        }
        rows.push_back(row);
        rec.text.push_back(fmt(x) + "\t" + cell);
    }
    rec.result["kind"] = "table";
    rec.result["columns"] = json::array({"x", "digamma"});
    rec.result["rows"] = rows;
    return rec;
}

inline void report_error(std::ostream& err, const std::string& kind, const std::string& message, json extra = json::object())
{
    json line;
    line["error"] = kind;
    line["message"] = message;
    for (auto it = extra.begin(); it != extra.end(); ++it) line[it.key()] = it.value();
    err << line.dump() << '\n';
}

} // namespace detail

/// Runs one command. args excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    detail::Params p;
    CLI::App app{"ln of the derivative operator: closed forms, oracles and identities", "logderiv"};
    app.require_subcommand(1);

    auto add_common = [&p](CLI::App* cmd) {
        cmd->add_flag("--json", p.json_out, "Emit a JSON record");
        cmd->add_option("--tol", p.tol, "Tolerance for checks and iterative methods")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };

    auto* apply = app.add_subcommand("apply", "Apply an operator to an expression");
    apply->require_subcommand(1);
    auto* logd = apply->add_subcommand("logd", "ln d/dx of an expression, as a log-series");
    logd->add_option("--expr", p.expr, "Expression, e.g. \"1 + 2x^3 - ln(x)\"")->required();
    logd->add_option("--at", p.at, "Also evaluate at this x and cross-check with the nu-limit");
    add_common(logd);

    auto* frac = app.add_subcommand("fracdiff", "Fractional derivative d^nu/dx^nu of an expression at a point");
    frac->add_option("--nu", p.nu, "Order nu >= 0")->required();
    frac->add_option("--expr", p.expr, "Expression")->required();
    frac->add_option("--at", p.at, "Evaluation point x > 0")->required();
    add_common(frac);

    auto* verify = app.add_subcommand("verify", "Check an identity against an independent oracle");
    verify->require_subcommand(1);
    auto* k0 = verify->add_subcommand("k0", "[ln d/dx + ln(2 sqrt x)] I0(sqrt x) = K0(sqrt x)");
    k0->add_option("--x", p.x, "Point x > 0")->required();
    add_common(k0);
    auto* comm = verify->add_subcommand("commutator", "[ln d/dx, d/dx] x^n = delta_{n0}/x");
    comm->add_option("--n", p.n, "Monomial degree n >= 0")->required();
    add_common(comm);
    auto* dalpha = verify->add_subcommand("dalpha", "dJ_alpha/dalpha series against a finite difference");
    dalpha->add_option("--alpha", p.alpha, "Order alpha >= 0")->required();
    dalpha->add_option("--x", p.x, "Point x > 0")->required();
    add_common(dalpha);

    auto* integral = app.add_subcommand("integral", "Integrals with known closed forms");
    integral->require_subcommand(1);
    auto* b = integral->add_subcommand("B", "B_alpha = int_0^inf J_alpha(x) ln x dx");
    b->add_option("--alpha", p.alpha, "Order alpha in [0, 6]")->required();
    b->add_option("--panels", p.panels, "Panel budget (zeros of J_alpha)")->capture_default_str();
    add_common(b);

    auto* table = app.add_subcommand("table", "Tabulate a function");
    table->require_subcommand(1);
    auto* dg = table->add_subcommand("digamma", "psi(x) on a grid");
    dg->add_option("--from", p.from)->required();
    dg->add_option("--to", p.to)->required();
    dg->add_option("--step", p.step)->required();
    add_common(dg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        detail::report_error(err, "usage", e.what());
        return kUsage;
    }

    try {
        const SeriesConfig config = detail::config_from_env();
        OutputRecord rec;
        if (*logd) rec = detail::cmd_apply_logd(p, config);
        else if (*frac) rec = detail::cmd_fracdiff(p, config);
        else if (*k0) rec = detail::cmd_verify_k0(p, config);
        else if (*comm) rec = detail::cmd_verify_commutator(p);
        else if (*dalpha) rec = detail::cmd_verify_dalpha(p);
        else if (*b) rec = detail::cmd_integral_b(p);
        else rec = detail::cmd_table_digamma(p);

        if (p.json_out) out << rec.to_json().dump(2) << '\n';
        else
            for (const auto& line : rec.text) out << line << '\n';
        if (!rec.passed) {
            detail::report_error(err, "check_failed", rec.failure);
            return kNumerical;
        }
        return kOk;
    } catch (const expr::parse_error& e) {
        json extra;
        extra["offset"] = e.offset();
        extra["expected"] = e.expected();
        detail::report_error(err, "parse", e.what(), extra);
        return kUsage;
    } catch (const CLI::ValidationError& e) {
        detail::report_error(err, "usage", e.what());
        return kUsage;
    } catch (const convergence_error& e) {
        detail::report_error(err, "convergence", e.what());
        return kNumerical;
    } catch (const domain_error& e) {
        detail::report_error(err, "domain", e.what());
        return kDomain;
    } catch (const error& e) {
        detail::report_error(err, "domain", e.what());
        return kDomain;
    }
}

} // namespace logderiv::cli
