#pragma once

// Power-law fractional derivative ∂^ν x^μ = Γ(μ+1)/Γ(μ−ν+1) x^(μ−ν), its
// extension to power series and to ln x, and the ν → 0 difference quotient
// that realizes ln ∂ numerically.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "logderiv/error.hpp"
#include "logderiv/series.hpp"
#include "logderiv/specfun.hpp"

namespace logderiv {

/// x^(−sigma) · base(x), with a real offset sigma.
struct ShiftedSeries {
    double sigma = 0.0;
    LaurentSeries base;

    double evaluate(double x) const
    {
        if (!(x > 0.0)) throw domain_error("ShiftedSeries::evaluate: requires x > 0");
        return std::pow(x, -sigma) * base.evaluate(x);
    }

    /// The same function as a LaurentSeries; only valid for integer sigma.
    LaurentSeries to_laurent() const
    {
        if (sigma != std::nearbyint(sigma)) throw domain_error("ShiftedSeries::to_laurent: non-integer offset");
        return base.shifted(-static_cast<int>(sigma));
    }
};

struct MonomialImage {
    double coeff = 0.0;
    double exponent = 0.0;
};

/// ∂^ν x^μ as (coefficient, exponent). A Γ pole in the denominator yields a zero coefficient.
inline MonomialImage frac_deriv_monomial(double mu, double nu)
{
    if (specfun::detail::is_nonpositive_integer(mu + 1.0))
        throw pole_error("frac_deriv_monomial: Gamma(mu + 1) is singular at mu = " + logderiv::detail::num(mu));
    const double denom_arg = mu - nu + 1.0;
    const double rg = specfun::reciprocal_gamma(denom_arg);
    return {rg == 0.0 ? 0.0 : specfun::gamma(mu + 1.0) * rg, mu - nu};
}

namespace detail {

// Γ(n+1)/Γ(n+1−r) for integer n >= 0 and 0 <= r < 1.
inline double falling_gamma_ratio(int n, double r)
{
    if (r == 0.0) return 1.0;
    if (n < 150) return specfun::gamma(n + 1.0) * specfun::reciprocal_gamma(n + 1.0 - r);
    return std::exp(specfun::log_gamma(n + 1.0) - specfun::log_gamma(n + 1.0 - r));
}

} // namespace detail

/// ∂^ν f termwise. The result keeps base exponents n and carries sigma = ν.
/// ν >= 1 is applied as ∂^⌊ν⌋ ∘ ∂^(ν − ⌊ν⌋).
inline ShiftedSeries frac_deriv_series(const LaurentSeries& f, double nu)
{
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw domain_error("frac_deriv_series: requires nu >= 0");
    if (f.e_min() < 0) throw domain_error("frac_deriv_series: negative exponents are outside the operator domain");
    const double whole = std::floor(nu);
    const double frac = nu - whole;
    const int steps = static_cast<int>(whole);
    if (f.is_zero()) return {nu, f};

    std::vector<double> out(f.coeffs().size());
    for (int n = f.e_min(); n <= f.e_max(); ++n) {
        double c = f.coeff(n);
        if (c == 0.0) continue;
        c *= detail::falling_gamma_ratio(n, frac);
        // ordinary derivatives of x^(n − frac)
        for (int j = 0; j < steps && c != 0.0; ++j) c *= (n - frac - j);
        out[static_cast<std::size_t>(n - f.e_min())] = c;
    }
    return {nu, LaurentSeries(f.e_min(), std::move(out), f.truncated())};
}

/// ∂^μ ln x = −[γ − ln x + ψ(1−μ)] / (x^μ Γ(1−μ)).
/// At μ = m = 1, 2, ... the removable singularity is filled with (−1)^(m−1)(m−1)!/x^m.
inline double frac_deriv_ln(double mu, double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("frac_deriv_ln: requires x > 0");
    if (!std::isfinite(mu)) throw domain_error("frac_deriv_ln: non-finite order");
    const double arg = 1.0 - mu;
    if (specfun::detail::is_nonpositive_integer(arg)) {
        const int m = static_cast<int>(mu);
        const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
        return sign * specfun::gamma(static_cast<double>(m)) / std::pow(x, m);
    }
    const double bracket = constants::euler_gamma - std::log(x) + specfun::digamma(arg);
    return -std::pow(x, -mu) * specfun::reciprocal_gamma(arg) * bracket;
}

/// A power series plus a multiple of ln x: the inputs the operators accept.
struct FracOperand {
    LaurentSeries power;
    double ln_coeff = 0.0;

    static FracOperand ln_x() { return {LaurentSeries{}, 1.0}; }

    double evaluate(double x) const
    {
        double v = power.evaluate(x);
        if (ln_coeff != 0.0) v += ln_coeff * std::log(x);
        return v;
    }
};

/// (∂^ν f)(x).
inline double frac_deriv_value(const FracOperand& f, double nu, double x)
{
    if (!(x > 0.0)) throw domain_error("frac_deriv_value: requires x > 0");
    double v = frac_deriv_series(f.power, nu).evaluate(x);
    if (f.ln_coeff != 0.0) v += f.ln_coeff * frac_deriv_ln(nu, x);
    return v;
}

struct LimitOptions {
    double nu0 = 1e-2;  // first ν; the sequence halves from here
    int points = 6;     // at least 6
};

struct LimitEstimate {
    double value = 0.0;
    double err_estimate = 0.0;
    std::vector<double> nu_sequence;
};

/// lim_{ν↓0} [(∂^ν f)(x) − f(x)] / ν by Richardson extrapolation (order 2) on a halving ν sequence.
inline LimitEstimate numeric_log_limit(const FracOperand& f, double x, const LimitOptions& options = {})
{
    if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("numeric_log_limit: requires x > 0");
    if (options.points < 6) throw domain_error("numeric_log_limit: need at least 6 points");
    if (!(options.nu0 > 0.0 && options.nu0 < 1.0)) throw domain_error("numeric_log_limit: nu0 must lie in (0, 1)");

    constexpr int kOrder = 2;
    const double base = f.evaluate(x);
    LimitEstimate est;
    // rows[j][m]: m-th Richardson column at ν_j
    std::vector<std::array<double, kOrder + 1>> rows;
    std::vector<double> diagonal;
    double nu = options.nu0;
    for (int j = 0; j < options.points; ++j, nu *= 0.5) {
        est.nu_sequence.push_back(nu);
        std::array<double, kOrder + 1> row{};
        row[0] = (frac_deriv_value(f, nu, x) - base) / nu;
        for (int m = 1; m <= std::min(j, kOrder); ++m) {
            const double factor = std::ldexp(1.0, m) - 1.0;
            row[m] = row[m - 1] + (row[m - 1] - rows.back()[m - 1]) / factor;
        }
        rows.push_back(row);
        if (j >= kOrder) diagonal.push_back(row[kOrder]);
    }

    std::vector<double> deltas;
    for (std::size_t i = 1; i < diagonal.size(); ++i) deltas.push_back(std::abs(diagonal[i] - diagonal[i - 1]));
    est.value = diagonal.back();
    est.err_estimate = deltas.back();

    // cancellation in the quotient bounds how small the deltas can get
    const double floor = 256.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(base)) /
                         est.nu_sequence.back();
    for (std::size_t i = deltas.size() - 2; i < deltas.size(); ++i) {
        if (deltas[i] > deltas[i - 1] && deltas[i] > floor)
            throw convergence_error("numeric_log_limit: extrapolation deltas stopped shrinking at x = " +
                                    logderiv::detail::num(x));
    }
    return est;
}

} // namespace logderiv
