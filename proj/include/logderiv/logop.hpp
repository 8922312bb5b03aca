#pragma once

// Closed-form action of ln ∂ on constants, monomials, power series and ln x.

#include <string>
#include <vector>

#include "logderiv/error.hpp"
#include "logderiv/series.hpp"
#include "logderiv/specfun.hpp"

namespace logderiv {

struct LogOpResult {
    LogSeries result;
    bool truncated = false;
};

/// ln ∂ x^n = x^n (ψ(n+1) − ln x). For n = 0 this is −γ − ln x.
inline LogSeries log_deriv_monomial(int n)
{
    if (n < 0) throw domain_error("log_deriv_monomial: requires n >= 0");
    LogSeries out(LaurentSeries::monomial(specfun::harmonic(n) - constants::euler_gamma, n));
    out.set_part(1, LaurentSeries::monomial(-1.0, n));
    return out;
}

/// ln ∂ f = −(γ + ln x) f + Σ c_n h_n x^n for f = Σ c_n x^n, n >= 0.
inline LogOpResult log_deriv_series(const LaurentSeries& f)
{
    if (f.e_min() < 0) throw domain_error("log_deriv_series: negative exponents are outside the operator domain");
    if (f.is_zero()) return {LogSeries(f), f.truncated()};
    std::vector<double> q0(f.coeffs().size());
    double h = specfun::harmonic(f.e_min());
    for (int n = f.e_min(); n <= f.e_max(); ++n) {
        if (n > f.e_min()) h += 1.0 / n;
        q0[static_cast<std::size_t>(n - f.e_min())] = f.coeff(n) * (h - constants::euler_gamma);
    }
    LogSeries out(LaurentSeries(f.e_min(), std::move(q0), f.truncated()));
    out.set_part(1, combine(-1.0, f, 0.0, LaurentSeries{}));
    return {out, f.truncated()};
}

/// ln ∂ ln x = ζ(2) − (γ + ln x) ln x.
///
/// The constant is +ζ(2): it is ψ'(1), the ν-slope of ∂^ν ln x at x = 1.
inline LogSeries log_deriv_lnx()
{
    LogSeries out(LaurentSeries::constant(constants::zeta2));
    out.set_part(1, LaurentSeries::constant(-constants::euler_gamma));
    out.set_part(2, LaurentSeries::constant(-1.0));
    return out;
}

/// ln ∂ on Q_0(x) + c·ln x, where Q_0 is a power series and c a constant.
/// Anything else has no closed form here and is rejected.
inline LogOpResult log_deriv(const LogSeries& f)
{
    if (f.ln_degree() > 1) throw domain_error("log_deriv: (ln x)^2 terms are outside the operator domain");
    const LaurentSeries& q1 = f.part(1);
    if (!q1.is_zero() && (q1.e_min() != 0 || q1.e_max() != 0))
        throw domain_error("log_deriv: only constant multiples of ln x are supported");
    LogOpResult out = log_deriv_series(f.part(0));
    if (!q1.is_zero()) out.result = linear_combine(1.0, out.result, q1.coeff(0), log_deriv_lnx());
    return out;
}

/// [ln ∂, ∂] x^n = ln ∂(∂ x^n) − ∂(ln ∂ x^n); equals δ_{n0}/x.
inline LogSeries commutator_on_monomial(int n)
{
    if (n < 0) throw domain_error("commutator_on_monomial: requires n >= 0");
    const LaurentSeries derivative = LaurentSeries::monomial(1.0, n).derivative();
    const LogSeries first = log_deriv_series(derivative).result;
    const LogSeries second = differentiate(log_deriv_monomial(n));
    return linear_combine(1.0, first, -1.0, second);
}

} // namespace logderiv
