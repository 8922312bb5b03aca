#pragma once

// Finite-interval adaptive quadrature, zeros of J_α, and the oscillatory
// integral ∫₀^∞ J_α(x) ln x dx summed panel by panel between zeros.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "logderiv/detail/gauss_kronrod.hpp"
#include "logderiv/error.hpp"
#include "logderiv/specfun.hpp"

namespace logderiv::quad {

struct QuadValue {
    double value = 0.0;
    double err = 0.0;
};

struct IntegrateOptions {
    int max_depth = 40;
    // f has an integrable ln-type singularity at a; integrate in t with x = a + t²
    bool log_singular_left = false;
};

template <class F>
QuadValue adaptive_integrate(F&& f, double a, double b, double tol, const IntegrateOptions& options = {})
{
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw domain_error("adaptive_integrate: requires a < b");
    if (!(tol > 0.0)) throw domain_error("adaptive_integrate: tol must be positive");
    if (options.log_singular_left) {
        auto g = [&f, a](double t) { return 2.0 * t * f(a + t * t); };
        const auto r = logderiv::detail::integrate_gk(g, 0.0, std::sqrt(b - a), tol, options.max_depth);
        return {r.value, r.err};
    }
    const auto r = logderiv::detail::integrate_gk(f, a, b, tol, options.max_depth);
    return {r.value, r.err};
}

/// The first few zeros j_{α,1..m} of J_α, ascending.
struct ZeroTable {
    double alpha = 0.0;
    std::vector<double> zeros;
};

namespace detail {

inline double bessel_j_prime(double alpha, double x)
{
    return alpha / x * specfun::bessel_j(alpha, x) - specfun::bessel_j(alpha + 1.0, x);
}

} // namespace detail

/// k-th positive zero of J_α from the McMahon seed β − (4α²−1)/(8β),
/// β = (k + α/2 − 1/4)π, refined by Newton steps kept inside a sign-change bracket.
inline double bessel_zero(double alpha, int k)
{
    if (!(alpha >= 0.0 && alpha <= 6.0)) throw domain_error("bessel_zero: alpha must lie in [0, 6]");
    if (k < 1) throw domain_error("bessel_zero: k must be >= 1");

    const double beta = (k + 0.5 * alpha - 0.25) * constants::pi;
    const double seed = beta - (4.0 * alpha * alpha - 1.0) / (8.0 * beta);

    // walk outward from the seed, alternating sides, until J changes sign
    constexpr double kStep = 0.05;
    auto j = [alpha](double x) { return specfun::bessel_j(alpha, x); };
    double lo = 0.0, hi = 0.0, f_lo = 0.0, f_hi = 0.0;
    bool found = false;
    const double f_seed = j(seed);
    if (f_seed == 0.0) return seed;
    double left = seed, right = seed, f_left = f_seed, f_right = f_seed;
    for (int i = 0; i < 64 && !found; ++i) {
        const double next_right = right + kStep;
        const double f_next_right = j(next_right);
        if ((f_next_right > 0) != (f_right > 0)) {
            lo = right, hi = next_right, f_lo = f_right, f_hi = f_next_right;
            found = true;
            break;
        }
        right = next_right, f_right = f_next_right;
        const double next_left = left - kStep;
        if (next_left <= 0.0) continue;
        const double f_next_left = j(next_left);
        if ((f_next_left > 0) != (f_left > 0)) {
            lo = next_left, hi = left, f_lo = f_next_left, f_hi = f_left;
            found = true;
        }
        left = next_left, f_left = f_next_left;
    }
    if (!found) throw convergence_error("bessel_zero: no sign change near the McMahon seed");

    double x = f_lo * f_lo < f_hi * f_hi ? lo : hi;
    for (int iter = 0; iter < 50; ++iter) {
        const double fx = j(x);
        if (fx == 0.0) return x;
        if ((fx > 0) == (f_lo > 0)) lo = x, f_lo = fx;
        else hi = x, f_hi = fx;
        double next = x - fx / detail::bessel_j_prime(alpha, x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * x)
            return x;
    }
    throw convergence_error("bessel_zero: no convergence after 50 iterations");
}

inline ZeroTable bessel_zeros(double alpha, int count)
{
    ZeroTable table{alpha, {}};
    table.zeros.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) table.zeros.push_back(bessel_zero(alpha, k));
    return table;
}

struct QuadReport {
    double value = 0.0;
    double err_estimate = 0.0;
    int segments = 0;      // zero-to-zero panels used
    int accel_rounds = 0;  // pairwise-averaging rounds in the final estimate
};

struct BesselLogOptions {
    int panel_budget = 60;
    int accel_window = 24;  // partial sums fed to the averaging
    int min_panels = 8;
    int stagnation_after = 30;
};

/// Applies rounds of pairwise means to the given partial sums until one value remains.
inline double iterated_average(std::vector<double> sums)
{
    while (sums.size() > 1) {
        for (std::size_t i = 0; i + 1 < sums.size(); ++i) sums[i] = 0.5 * (sums[i] + sums[i + 1]);
        sums.pop_back();
    }
    return sums.front();
}

/// ∫₀^∞ J_α(x) ln x dx for α in [0, 6].
///
/// Panels run between consecutive zeros of J_α, so their contributions
/// alternate in sign; the partial sums are accelerated by iterated averaging.
inline QuadReport integrate_bessel_log(double alpha, double tol, const BesselLogOptions& options = {})
{
    if (!(alpha >= 0.0 && alpha <= 6.0)) throw domain_error("integrate_bessel_log: alpha must lie in [0, 6]");
    if (!(tol > 0.0)) throw domain_error("integrate_bessel_log: tol must be positive");
    if (options.panel_budget < 1 || options.accel_window < 2)
        throw domain_error("integrate_bessel_log: invalid panel budget or acceleration window");

    auto integrand = [alpha](double x) { return specfun::bessel_j(alpha, x) * std::log(x); };
    const double panel_tol = 1e-2 * tol;

    std::vector<double> partial;
    std::vector<double> deltas;
    double previous_estimate = std::numeric_limits<double>::quiet_NaN();
    double left = 0.0;
    double running = 0.0;
    QuadReport report;
    for (int m = 1; m <= options.panel_budget; ++m) {
        const double right = bessel_zero(alpha, m);
        IntegrateOptions io;
        io.log_singular_left = m == 1;
        running += adaptive_integrate(integrand, left, right, panel_tol, io).value;
        partial.push_back(running);
        left = right;

        const std::size_t window = std::min<std::size_t>(partial.size(), static_cast<std::size_t>(options.accel_window));
        const double estimate = iterated_average(std::vector<double>(partial.end() - static_cast<std::ptrdiff_t>(window), partial.end()));
        report.value = estimate;
        report.segments = m;
        report.accel_rounds = static_cast<int>(window) - 1;
        if (std::isnan(previous_estimate)) {
            previous_estimate = estimate;
            report.err_estimate = std::abs(partial.back());
            continue;
        }
        const double delta = std::abs(estimate - previous_estimate);
        previous_estimate = estimate;
        deltas.push_back(delta);
        report.err_estimate = delta;
        if (m >= options.min_panels && delta <= 0.5 * tol) return report;
        if (m >= options.stagnation_after && deltas.size() > 10 && delta >= deltas[deltas.size() - 11])
            throw convergence_error("integrate_bessel_log: acceleration stagnated after " + std::to_string(m) + " panels");
    }
    throw convergence_error("integrate_bessel_log: tolerance " + logderiv::detail::num(tol) + " not reached within " +
                            std::to_string(options.panel_budget) + " panels (last delta " +
                            logderiv::detail::num(report.err_estimate) + ")");
}

} // namespace logderiv::quad
