// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gen.hpp"
#include "golden.hpp"
#include "logderiv/fracdiff.hpp"
#include "logderiv/logop.hpp"
#include "logderiv/quad.hpp"
#include "logderiv/specfun.hpp"
#include "logderiv/umbral.hpp"

using namespace logderiv;
using constants::euler_gamma;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string fmt_full(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

double max_coeff_diff(const LogSeries& a, const LogSeries& b)
{
    const LogSeries d = linear_combine(1.0, a, -1.0, b);
    double m = 0.0;
    for (int k = 0; k <= kMaxLnPower; ++k)
        for (double c : d.part(k).coeffs()) m = std::max(m, std::abs(c));
    return m;
}

Outcome constant_rule()
{
    Outcome o;
    double worst_closed = 0.0, worst_limit = 0.0;
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
        const double exact = -std::log(x) - euler_gamma;
        const double closed = evaluate(log_deriv_monomial(0), x);
        worst_closed = std::max(worst_closed, std::abs(closed - exact));
        const LimitEstimate est = numeric_log_limit(FracOperand{LaurentSeries::constant(1.0), 0.0}, x);
        const double diff = std::abs(est.value - exact);
        worst_limit = std::max(worst_limit, diff);
        o.require(diff <= std::max(1e-6, 10 * est.err_estimate), "limit at x = " + fmt(x) + " off by " + fmt(diff));
    }
    o.require(worst_closed <= 4 * std::numeric_limits<double>::epsilon(), "closed form off by " + fmt(worst_closed));
    o.detail = "closed form max err " + fmt(worst_closed) + ", nu-limit max err " + fmt(worst_limit);
    return o;
}

Outcome monomial_rule()
{
    Outcome o;
    double worst = 0.0;
    for (int n = 0; n <= 30; ++n) {
        const LogSeries f = log_deriv_monomial(n);
        const double diff = std::abs(f.part(0).coeff(n) - (-euler_gamma + specfun::harmonic(n)));
        worst = std::max(worst, diff);
        o.require(diff <= 1e-12, "psi coefficient n = " + std::to_string(n));
        o.require(f.part(1) == LaurentSeries::monomial(-1.0, n) && f.part(2).is_zero(),
                  "ln coefficient n = " + std::to_string(n));
    }
    double worst_limit = 0.0;
    for (int n : {1, 2, 5})
        for (double x : {0.5, 2.0}) {
            const LimitEstimate est = numeric_log_limit(FracOperand{LaurentSeries::monomial(1.0, n), 0.0}, x);
            const double diff = std::abs(est.value - evaluate(log_deriv_monomial(n), x));
            worst_limit = std::max(worst_limit, diff);
            o.require(diff <= 1e-6, "limit n = " + std::to_string(n) + " x = " + fmt(x));
        }
    o.detail = "n = 0..30 max coeff err " + fmt(worst) + ", nu-limit max err " + fmt(worst_limit);
    return o;
}

Outcome linearity()
{
    Outcome o;
    testgen::Gen g(2024);
    double worst_lin = 0.0, worst_mono = 0.0;
    for (int i = 0; i < 500; ++i) {
        const LaurentSeries f = g.polynomial(30);
        const LaurentSeries h = g.polynomial(30);
        const double a = g.uniform(-2, 2);
        const double b = g.uniform(-2, 2);
        const double d = max_coeff_diff(log_deriv_series(combine(a, f, b, h)).result,
                                        linear_combine(a, log_deriv_series(f).result, b, log_deriv_series(h).result));
        worst_lin = std::max(worst_lin, d);

        const int n = g.integer(0, 30);
        const double c = g.uniform(-5, 5);
        const double m = max_coeff_diff(log_deriv_series(LaurentSeries::monomial(c, n)).result,
                                        linear_combine(c, log_deriv_monomial(n), 0.0, LogSeries{}));
        worst_mono = std::max(worst_mono, m);
    }
    o.require(worst_lin <= 1e-12, "linearity residual " + fmt(worst_lin));
    o.require(worst_mono <= 1e-12, "monomial consistency residual " + fmt(worst_mono));
    o.detail = "500 cases, linearity " + fmt(worst_lin) + ", monomial consistency " + fmt(worst_mono);
    return o;
}

Outcome k0_identity()
{
    Outcome o;
    double worst = 0.0;
    SeriesConfig cfg;
    cfg.trunc_order = 64;
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const auto r = umbral::k0_identity_check(x, 1e-10, cfg);
        worst = std::max(worst, r.abs_diff);
        o.require(r.abs_diff <= 1e-10, "x = " + fmt(x) + " abs_diff " + fmt(r.abs_diff));
    }
    o.detail = "max abs_diff " + fmt(worst) + " against the integral K0";
    return o;
}

Outcome ln_rule()
{
    Outcome o;
    double worst_ln = 0.0;
    for (double x : {0.1, 0.5, 1.0, 2.0, 10.0})
        for (double mu : {0.0, 1e-14, -1e-14})
            worst_ln = std::max(worst_ln, std::abs(frac_deriv_ln(mu, x) - std::log(x)));
    o.require(worst_ln <= 1e-10, "mu -> 0 path off by " + fmt(worst_ln));

    const double target = -std::numbers::pi * std::numbers::pi / 6.0;
    const double closed = evaluate(log_deriv_lnx(), 1.0);
    const LimitEstimate est = numeric_log_limit(FracOperand::ln_x(), 1.0);
    o.require(std::abs(closed - target) <= 1e-12,
              "closed form at x = 1 is " + fmt_full(closed) + ", expected -zeta(2) = " + fmt_full(target));
    o.require(std::abs(est.value - target) <= 1e-5,
              "nu-limit at x = 1 is " + fmt_full(est.value) + ", expected " + fmt_full(target));
    o.detail = "closed " + fmt_full(closed) + ", nu-limit " + fmt_full(est.value) + " (they agree to " +
               fmt(std::abs(closed - est.value)) + "); the -zeta(2) target has the opposite sign";
    return o;
}

Outcome commutator()
{
    Outcome o;
    o.require(commutator_on_monomial(0) == LogSeries(LaurentSeries::monomial(1.0, -1)), "n = 0 is not exactly 1/x");
    double worst = 0.0;
    for (int n = 1; n <= 30; ++n) worst = std::max(worst, max_coeff_diff(commutator_on_monomial(n), LogSeries{}));
    o.require(worst <= 1e-12, "residual " + fmt(worst));
    o.detail = "n = 0 gives 1/x exactly, n = 1..30 max residual " + fmt(worst);
    return o;
}

Outcome umbral_bessel()
{
    Outcome o;
    testgen::Gen g(7);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double alpha = g.uniform(0.0, 5.0);
        const double x = g.uniform(0.0, 10.0);
        worst = std::max(worst, std::abs(umbral::bessel_via_umbral(alpha, x) - specfun::bessel_j(alpha, x)));
    }
    double worst_half = 0.0;
    for (double x : {0.5, 1.0, 2.0})
        worst_half = std::max(worst_half, std::abs(umbral::bessel_via_umbral(0.5, x) -
                                                   std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x)));
    o.require(worst <= 1e-12, "umbral vs direct " + fmt(worst));
    o.require(worst_half <= 1e-12, "half order " + fmt(worst_half));
    o.detail = "200 random points max err " + fmt(worst) + ", order 1/2 max err " + fmt(worst_half);
    return o;
}

Outcome order_derivative()
{
    Outcome o;
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double alpha = 0.5 * i;
            const double x = 0.5 + 0.875 * j;
            const double fd = (umbral::bessel_via_umbral(alpha + h, x) - umbral::bessel_via_umbral(alpha - h, x)) / (2 * h);
            worst = std::max(worst, std::abs(umbral::dbessel_dalpha(alpha, x) - fd));
        }
    o.require(worst <= 1e-7, "grid max err " + fmt(worst));
    o.detail = "5x5 grid max err " + fmt(worst);
    return o;
}

Outcome log_integral()
{
    Outcome o;
    double worst = 0.0, slowest = 0.0;
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const quad::QuadReport r = quad::integrate_bessel_log(alpha, 1e-8);
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        const double closed = constants::ln2 + specfun::digamma(0.5 * (alpha + 1.0));
        const double diff = std::abs(r.value - closed);
        worst = std::max(worst, diff);
        o.require(diff <= 1e-6, "alpha = " + fmt(alpha) + " off by " + fmt(diff));
    }
    const double b0 = umbral::bessel_log_integral_closed(0.0);
    o.require(std::abs(b0 - (-euler_gamma - constants::ln2)) <= 1e-15, "B0 closed form");
    o.require(std::abs(b0 - -1.270362845) <= 5e-10, "B0 digits");
    o.require(slowest <= 10.0, "slowest alpha took " + fmt(slowest) + " s");
    o.detail = "max err " + fmt(worst) + ", B0 = " + fmt_full(b0) + ", slowest " + fmt(slowest) + " s";
    return o;
}

Outcome specfun_consistency()
{
    Outcome o;
    testgen::Gen g(99);
    double gamma_rec = 0.0, psi_rec = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = g.uniform(0.5, 50.0);
        gamma_rec = std::max(gamma_rec, std::abs(specfun::gamma(x + 1.0) / (x * specfun::gamma(x)) - 1.0));
        psi_rec = std::max(psi_rec, std::abs(specfun::digamma(x + 1.0) - specfun::digamma(x) - 1.0 / x));
    }
    double harmonic_gap = 0.0;
    for (int n = 0; n <= 60; ++n)
        harmonic_gap = std::max(harmonic_gap, std::abs(specfun::digamma(n + 1.0) - (-euler_gamma + specfun::harmonic(n))));

    // K0 by its ascending series, against the integral oracle
    double k0_gap = 0.0;
    for (double z : {0.5, 1.0, 2.0, 4.0}) {
        const double q = z * z / 4.0;
        double term = 1.0, i0 = 1.0, tail = 0.0, h = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            h += 1.0 / k;
            i0 += term;
            tail += term * h;
        }
        const double series = -(std::log(z / 2.0) + euler_gamma) * i0 + tail;
        k0_gap = std::max(k0_gap, std::abs(series - specfun::bessel_k0_oracle(z, 1e-12)));
    }
    o.require(gamma_rec <= 1e-12, "gamma recurrence " + fmt(gamma_rec));
    o.require(psi_rec <= 1e-12, "digamma recurrence " + fmt(psi_rec));
    o.require(harmonic_gap <= 1e-12, "digamma at integers " + fmt(harmonic_gap));
    o.require(k0_gap <= 1e-10, "two K0 paths " + fmt(k0_gap));
    o.detail = "gamma rec " + fmt(gamma_rec) + ", psi rec " + fmt(psi_rec) + ", psi(n+1) " + fmt(harmonic_gap) +
               ", K0 paths " + fmt(k0_gap);
    return o;
}

Outcome cli_contract()
{
    Outcome o;
    const auto cases = golden::load(LOGDERIV_GOLDEN_DIR);
    for (const auto& c : cases)
        for (const auto& p : golden::check(c)) o.require(false, c.name + ": " + p);
    const auto parse = golden::run({"apply", "logd", "--expr", "ln(x"});
    o.require(parse.code == 2, "parse error exit " + std::to_string(parse.code));
    const auto domain = golden::run({"integral", "B", "--alpha", "7"});
    o.require(domain.code == 4, "domain error exit " + std::to_string(domain.code));
    const auto stall = golden::run({"integral", "B", "--alpha", "0", "--tol", "1e-12", "--panels", "2"});
    o.require(stall.code == 3, "non-convergence exit " + std::to_string(stall.code));
    for (const auto* r : {&parse, &domain, &stall}) {
        try {
            const auto line = golden::json::parse(r->err);
            o.require(line.contains("error") && line.contains("message"), "error line lacks fields");
        } catch (const std::exception&) {
            o.require(false, "error stream is not one JSON line: " + r->err);
        }
    }
    o.detail = std::to_string(cases.size()) + " golden files, exit codes 2/4/3 checked";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"ln d of a constant is -ln x - gamma", constant_rule},
        {"ln d of monomials: digamma coefficients", monomial_rule},
        {"linearity and monomial consistency", linearity},
        {"K0 identity for I0(sqrt x)", k0_identity},
        {"ln d of ln x", ln_rule},
        {"commutator with d/dx", commutator},
        {"umbral Bessel series", umbral_bessel},
        {"order derivative of J", order_derivative},
        {"integral of J ln x", log_integral},
        {"special function self-consistency", specfun_consistency},
        {"CLI golden files and exit codes", cli_contract},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
        if (!o.pass) ++failures;
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
    return failures == 0 ? 0 : 1;
}
