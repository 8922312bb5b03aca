#pragma once

// Umbral form of the Bessel functions: J_α(x) = (ĉ x/2)^α exp(−ĉ (x/2)²) φ(0)
// with ĉ^μ φ(0) = φ(μ) = 1/Γ(μ+1), and what follows from it: the index
// derivative ∂_α J_α, the I₀/K₀ identity for ln ∂, and the closed form of
// ∫₀^∞ J_α(x) ln x dx.

#include <cmath>
#include <string>
#include <vector>

#include "logderiv/error.hpp"
#include "logderiv/logop.hpp"
#include "logderiv/series.hpp"
#include "logderiv/specfun.hpp"

namespace logderiv::umbral {

/// φ(μ) = 1/Γ(μ+1); zero where μ+1 is a pole of Γ.
inline double umbral_phi(double mu) { return specfun::reciprocal_gamma(mu + 1.0); }

/// One term of Σ_k (−1)^k/k! (x/2)^(2k+α) · ĉ^(k+α) φ(0).
struct UmbralTerm {
    int k = 0;
    double weight = 0.0;   // (−1)^k/k! (x/2)^(2k+α)
    double phi_arg = 0.0;  // k + α
};

/// Generates the umbral Bessel terms in extended precision.
///
/// φ(k+α) follows from φ(k−1+α)/(k+α), restarting from umbral_phi
/// whenever the previous value sat on a pole.
class UmbralTermStream {
public:
    UmbralTermStream(double alpha, double x)
        : alpha_(alpha), q_(-static_cast<ext>(x) * x / 4), weight_(std::pow(static_cast<ext>(x) / 2, alpha)),
          phi_(umbral_phi(alpha))
    {
    }

    UmbralTerm term() const { return {k_, static_cast<double>(weight_), k_ + alpha_}; }
    long double weight() const { return weight_; }
    long double phi() const { return phi_; }
    /// weight · φ(k+α), the k-th term of J_α(x).
    long double value() const { return weight_ * phi_; }
    int index() const { return k_; }

    void advance()
    {
        ++k_;
        weight_ *= q_ / k_;
        const double arg = k_ + alpha_;
        phi_ = phi_ == 0 ? umbral_phi(arg) : phi_ / static_cast<ext>(arg);
    }

    /// Bound on |term_{k+1}/term_k| for all later terms, or >= 1 when no bound holds yet.
    long double ratio_bound() const
    {
        const ext denom = (k_ + 1) * std::abs(k_ + 1 + static_cast<ext>(alpha_));
        if (k_ + 1 + alpha_ <= 0 || denom == 0) return 2;
        return std::abs(q_) / denom;
    }

private:
    using ext = long double;
    double alpha_;
    ext q_;
    ext weight_;
    ext phi_;
    int k_ = 0;
};

/// J_α(x) summed in umbral form. α may be any real when x > 0.
inline double bessel_via_umbral(double alpha, double x, double tol = specfun::kDefaultTol,
                                int term_cap = specfun::kDefaultTermCap)
{
    if (!(tol > 0.0)) throw domain_error("bessel_via_umbral: tol must be positive");
    if (!std::isfinite(alpha) || !std::isfinite(x) || x < 0.0) throw domain_error("bessel_via_umbral: requires x >= 0");
    if (x == 0.0) {
        if (alpha < 0.0 && alpha != std::nearbyint(alpha)) throw domain_error("bessel_via_umbral: singular at x = 0");
        return alpha == 0.0 ? 1.0 : 0.0;
    }
    UmbralTermStream stream(alpha, x);
    long double sum = stream.value();
    for (int k = 0; k < term_cap; ++k) {
        stream.advance();
        sum += stream.value();
        const long double r = stream.ratio_bound();
        if (r < 1 && std::abs(stream.value()) * r / (1 - r) <= tol * std::abs(sum)) return static_cast<double>(sum);
        if (stream.weight() == 0) return static_cast<double>(sum);
    }
    throw convergence_error("bessel_via_umbral: no convergence within " + std::to_string(term_cap) + " terms");
}

/// ∂J_α/∂α = ln(x/2) J_α(x) − Σ_k (−1)^k ψ(k+α+1)/(k! Γ(k+α+1)) (x/2)^(2k+α).
///
/// ln ĉ acting on φ(k+α) is the derivative of 1/Γ, −ψ(k+α+1)/Γ(k+α+1); that
/// analytic form replaces the small-ν difference quotient.
inline double dbessel_dalpha(double alpha, double x, double tol = specfun::kDefaultTol,
                             int term_cap = specfun::kDefaultTermCap)
{
    if (!(tol > 0.0)) throw domain_error("dbessel_dalpha: tol must be positive");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw domain_error("dbessel_dalpha: requires alpha >= 0");
    if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("dbessel_dalpha: requires x > 0");

    constexpr int kLookahead = 3;
    const long double threshold = tol * 1e-2;
    UmbralTermStream stream(alpha, x);
    long double j_sum = 0;
    long double psi_sum = 0;
    int quiet = 0;
    for (int k = 0; k < term_cap; ++k) {
        const long double j_term = stream.value();
        const long double psi_term = j_term * specfun::digamma(k + alpha + 1.0);
        j_sum += j_term;
        psi_sum += psi_term;
        const bool small = std::abs(j_term) < threshold && std::abs(psi_term) < threshold;
        quiet = small && stream.ratio_bound() < 1 ? quiet + 1 : 0;
        if (quiet >= kLookahead) {
            return static_cast<double>(std::log(static_cast<long double>(x) / 2) * j_sum - psi_sum);
        }
        stream.advance();
    }
    throw convergence_error("dbessel_dalpha: no convergence within " + std::to_string(term_cap) + " terms");
}

/// I₀(√x) = Σ_n (x/4)^n/(n!)² as a power series in x, cut at trunc_order.
inline LaurentSeries i0_sqrt_series(const SeriesConfig& config = {})
{
    config.validate();
    std::vector<double> c(static_cast<std::size_t>(config.trunc_order) + 1);
    double term = 1.0;
    for (int n = 0; n <= config.trunc_order; ++n) {
        if (n > 0) term /= 4.0 * n * n;
        c[static_cast<std::size_t>(n)] = term;
    }
    return LaurentSeries(0, std::move(c), true);
}

struct IdentityReport {
    double x = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_diff = 0.0;
    int terms_used = 0;
    bool truncation_insufficient = false;  // the dropped tail may exceed tol
};

/// [ln ∂ + ln(2√x)] I₀(√x) against the integral-representation K₀(√x).
inline IdentityReport k0_identity_check(double x, double tol = 1e-10, const SeriesConfig& config = {})
{
    if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("k0_identity_check: requires x > 0");
    if (!(tol > 0.0)) throw domain_error("k0_identity_check: tol must be positive");
    const LaurentSeries f = i0_sqrt_series(config);
    const LogOpResult image = log_deriv_series(f);
    const double z = std::sqrt(x);

    IdentityReport report;
    report.x = x;
    report.lhs = evaluate(image.result, x, config) + std::log(2.0 * z) * specfun::bessel_i0(z);
    report.rhs = specfun::bessel_k0_oracle(z, std::max(1e-15, 1e-2 * tol));
    report.abs_diff = std::abs(report.lhs - report.rhs);
    report.terms_used = static_cast<int>(f.coeffs().size());

    // the omitted terms are bounded by the last kept one times the ratio of a geometric tail
    const int top = f.e_max();
    const double ratio = x / (4.0 * (top + 1.0) * (top + 1.0));
    const double last = f.coeff(top) * std::pow(x, top) *
                        (specfun::harmonic(top) + constants::euler_gamma + std::abs(std::log(x)) + 1.0);
    report.truncation_insufficient = ratio >= 1.0 || last * ratio / (1.0 - ratio) > tol;
    return report;
}

/// ∫₀^∞ J_α(x) ln x dx = ln 2 + ψ((α+1)/2), α > −1.
inline double bessel_log_integral_closed(double alpha)
{
    if (!(alpha > -1.0) || !std::isfinite(alpha))
        throw pole_error("bessel_log_integral_closed: requires alpha > -1");
    return constants::ln2 + specfun::digamma(0.5 * (alpha + 1.0));
}

} // namespace logderiv::umbral
