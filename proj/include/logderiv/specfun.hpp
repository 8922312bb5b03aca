#pragma once

// Scalar special functions: Γ, 1/Γ, ln Γ, ψ, harmonic numbers, and the
// Bessel evaluators J_α, I₀, K₀ used as references by the operator code.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "logderiv/detail/gauss_kronrod.hpp"
#include "logderiv/error.hpp"

namespace logderiv {

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = 0.577215664901532860606;  // γ
inline constexpr double zeta2 = pi * pi / 6.0;                  // ζ(2)
inline constexpr double ln2 = std::numbers::ln2;
} // namespace constants

namespace specfun {

inline constexpr double kDefaultTol = 1e-14;
inline constexpr int kDefaultTermCap = 400;
// Γ(x) overflows a double past this point.
inline constexpr double kGammaOverflow = 171.62437695630272;

namespace detail {

// Lanczos approximation, g = 7, nine coefficients (about 15 significant digits).
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double z)
{
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    return sum;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

/// sin(πx) with exact zeros at integers.
inline double sin_pi(double x)
{
    double r = x - 2.0 * std::nearbyint(0.5 * x);  // r in [-1, 1]
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(constants::pi * r);
}

/// π·cot(πx); caller guarantees x is not an integer.
inline double pi_cot_pi(double x)
{
    const double r = x - std::nearbyint(x);
    return constants::pi / std::tan(constants::pi * r);
}

/// Γ(x) for x >= 0.5, no overflow check. Integers get the exact factorial.
inline double gamma_positive(double x)
{
    if (x == std::nearbyint(x) && x <= 171.0) {
        double f = 1.0;
        for (double k = 2.0; k < x; k += 1.0) f *= k;
        return f;
    }
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    // split the power so that t^(z+1/2) does not overflow before e^{-t} is applied
    const double half_pow = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * constants::pi) * half_pow * (half_pow * std::exp(-t)) * lanczos_sum(z);
}

} // namespace detail

/// Γ(x). Reflection for x < 0.5.
inline double gamma(double x)
{
    if (!std::isfinite(x)) throw domain_error("gamma: non-finite argument");
    if (detail::is_nonpositive_integer(x)) throw pole_error("gamma: pole at x = " + logderiv::detail::num(x));
    if (x > kGammaOverflow) throw domain_error("gamma: overflow for x = " + logderiv::detail::num(x));
    if (x < 0.5) return constants::pi / (detail::sin_pi(x) * detail::gamma_positive(1.0 - x));
    return detail::gamma_positive(x);
}

/// 1/Γ(x), entire: exactly 0 at the poles of Γ.
inline double reciprocal_gamma(double x)
{
    if (std::isnan(x)) throw domain_error("reciprocal_gamma: NaN argument");
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x > kGammaOverflow) return 0.0;
    if (x < 0.5) {
        const double reflected = 1.0 - x;
        if (reflected > kGammaOverflow) return std::copysign(std::numeric_limits<double>::infinity(), detail::sin_pi(x));
        return detail::sin_pi(x) * detail::gamma_positive(reflected) / constants::pi;
    }
    return 1.0 / detail::gamma_positive(x);
}

/// ln|Γ(x)|.
inline double log_gamma(double x)
{
    if (!std::isfinite(x)) throw domain_error("log_gamma: non-finite argument");
    if (detail::is_nonpositive_integer(x)) throw pole_error("log_gamma: pole at x = " + logderiv::detail::num(x));
    if (x < 0.5) {
        return std::log(constants::pi) - std::log(std::abs(detail::sin_pi(x))) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    const double t = z + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * constants::pi) + (z + 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(z));
}

/// h_n = 1 + 1/2 + ... + 1/n, summed from the small end; h_0 = 0.
inline double harmonic(std::int64_t n)
{
    if (n < 0) throw domain_error("harmonic: negative index");
    double sum = 0.0;
    for (std::int64_t k = n; k >= 1; --k) sum += 1.0 / static_cast<double>(k);
    return sum;
}

/// ψ(x) = Γ'(x)/Γ(x). Upward recurrence to x >= 10, then the asymptotic series.
inline double digamma(double x)
{
    if (!std::isfinite(x)) throw domain_error("digamma: non-finite argument");
    if (detail::is_nonpositive_integer(x)) throw pole_error("digamma: pole at x = " + logderiv::detail::num(x));
    if (x < 0.0) return digamma(1.0 - x) - detail::pi_cot_pi(x);

    // at x >= 10 the first omitted Bernoulli term is below 5e-17
    using ext = long double;
    ext y = x;
    ext shift = 0;
    while (y < 10) {
        shift -= 1 / y;
        y += 1;
    }
    // B_{2k} / (2k) for k = 1..7
    static constexpr std::array<long double, 7> kBernoulliOver2k = {
        1.0L / 12, -1.0L / 120, 1.0L / 252, -1.0L / 240, 1.0L / 132, -691.0L / 32760, 1.0L / 12};
    const ext inv2 = 1 / (y * y);
    ext tail = 0;
    for (auto it = kBernoulliOver2k.rbegin(); it != kBernoulliOver2k.rend(); ++it) tail = (tail + *it) * inv2;
    return static_cast<double>(shift + std::log(y) - 0.5L / y - tail);
}

namespace detail {

// Power series, accumulated in extended precision.
inline double bessel_j_series(double alpha, double x, double tol, int term_cap)
{
    using ext = long double;
    const ext q = -static_cast<ext>(x) * x / 4;
    ext term = static_cast<ext>(std::pow(0.5 * x, alpha)) * static_cast<ext>(reciprocal_gamma(alpha + 1.0));
    ext sum = term;
    for (int k = 0; k < term_cap; ++k) {
        const ext ratio = q / ((k + 1) * (k + 1 + static_cast<ext>(alpha)));
        term *= ratio;
        sum += term;
        const ext r = std::abs(ratio);
        if (term == 0) return static_cast<double>(sum);
        if (r < 1 && std::abs(term) * r / (1 - r) <= tol * std::abs(sum)) return static_cast<double>(sum);
    }
    throw convergence_error("bessel_j: series did not converge within " + std::to_string(term_cap) + " terms");
}

// Hankel asymptotic expansion, truncated at its smallest term.
inline double bessel_j_asymptotic(double alpha, double x)
{
    const double mu = 4.0 * alpha * alpha;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * x * k);
        const double mag = std::abs(term);
        if (mag >= last) break;
        last = mag;
        switch (k % 4) {
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        default: p += term; break;
        }
        if (mag < 1e-17 * std::abs(p)) break;
    }
    // cos(x - φ), sin(x - φ) with φ = (α/2 + 1/4)π, expanded to keep the large-x reduction exact
    const double phase = (0.5 * alpha + 0.25) * constants::pi;
    const double cx = std::cos(x), sx = std::sin(x);
    const double cp = std::cos(phase), sp = std::sin(phase);
    const double cos_chi = cx * cp + sx * sp;
    const double sin_chi = sx * cp - cx * sp;
    return std::sqrt(2.0 / (constants::pi * x)) * (p * cos_chi - q * sin_chi);
}

// Schläfli's integral for real order α >= 0:
// J_α(x) = (1/π)∫₀^π cos(αθ − x sinθ)dθ − (sin απ/π)∫₀^∞ e^{−x sinh t − αt} dt
inline double bessel_j_integral(double alpha, double x)
{
    const double tol = 1e-16;
    auto oscillatory = [alpha, x](double theta) { return std::cos(alpha * theta - x * std::sin(theta)); };
    const double first = logderiv::detail::integrate_gk(oscillatory, 0.0, constants::pi, tol).value / constants::pi;
    const double s = sin_pi(alpha);
    if (s == 0.0) return first;
    // e^{-x sinh t} < 1e-18 beyond this point
    const double upper = std::asinh(42.0 / x);
    auto decaying = [alpha, x](double t) { return std::exp(-x * std::sinh(t) - alpha * t); };
    const double second = logderiv::detail::integrate_gk(decaying, 0.0, upper, tol).value;
    return first - s / constants::pi * second;
}

} // namespace detail

/// J_α(x) for α >= 0, x >= 0.
///
/// The defining power series is summed for x <= 8; beyond that its
/// cancellation costs too many digits, so Schläfli's integral is used on the
/// middle range and the Hankel expansion once x is large against α².
inline double bessel_j(double alpha, double x, double tol = kDefaultTol, int term_cap = kDefaultTermCap)
{
    if (!(tol > 0.0)) throw domain_error("bessel_j: tol must be positive");
    if (!(alpha >= 0.0) || !(x >= 0.0) || !std::isfinite(alpha) || !std::isfinite(x))
        throw domain_error("bessel_j: requires alpha >= 0 and x >= 0");
    if (x == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    if (x <= 8.0) return detail::bessel_j_series(alpha, x, tol, term_cap);
    if (x >= 25.0 && x >= alpha * alpha) return detail::bessel_j_asymptotic(alpha, x);
    return detail::bessel_j_integral(alpha, x);
}

/// I₀(z) = Σ (z²/4)^k / (k!)².
inline double bessel_i0(double z, double tol = kDefaultTol, int term_cap = kDefaultTermCap)
{
    if (!(tol > 0.0)) throw domain_error("bessel_i0: tol must be positive");
    if (!(z >= 0.0) || !std::isfinite(z)) throw domain_error("bessel_i0: requires z >= 0");
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= term_cap; ++k) {
        const double ratio = q / (static_cast<double>(k) * k);
        term *= ratio;
        sum += term;
        const double next = q / (static_cast<double>(k + 1) * (k + 1));
        if (next < 1.0 && term * next / (1.0 - next) <= tol * sum) return sum;
    }
    throw convergence_error("bessel_i0: series did not converge within " + std::to_string(term_cap) + " terms");
}

/// K₀(z) = ∫₀^∞ e^{−z cosh t} dt by adaptive quadrature on a truncated range.
/// Independent of every series path; the identity checks use it as their oracle.
inline double bessel_k0_oracle(double z, double tol = kDefaultTol)
{
    if (!(tol > 0.0)) throw domain_error("bessel_k0_oracle: tol must be positive");
    if (!(z > 0.0) || !std::isfinite(z)) throw domain_error("bessel_k0_oracle: requires z > 0");
    // factor e^{-z} out so the integrand peaks at 1; cut where it drops below tol/100
    const double cutoff = -std::log(tol * 1e-2);
    const double upper = std::acosh(1.0 + cutoff / z);
    auto integrand = [z](double t) { return std::exp(-z * (std::cosh(t) - 1.0)); };
    const auto inner = logderiv::detail::integrate_gk(integrand, 0.0, upper, 0.1 * tol);
    return std::exp(-z) * inner.value;
}

} // namespace specfun
} // namespace logderiv
