#pragma once

// Recursive panel-halving quadrature on the 7-point Gauss / 15-point Kronrod pair.

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "logderiv/error.hpp"

namespace logderiv::detail {

// Nodes and weights from QUADPACK qk15.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double value = 0.0;      // Kronrod result
    double err = 0.0;        // |Kronrod - Gauss|
    double abs_value = 0.0;  // integral of |f|, for the roundoff floor
};

template <class F>
PanelEstimate gauss_kronrod_15(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(fc) * kKronrodWeights[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kKronrodWeights[j] * (f1 + f2);
        abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
        // odd Kronrod nodes are the Gauss nodes
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

struct AdaptiveResult {
    double value = 0.0;
    double err = 0.0;
    int panels = 0;
};

// roundoff_density: attainable error per unit length, taken from the whole interval
// so that panels sitting on a zero of f are not held to a vanishing floor.
template <class F>
void adaptive_step(F& f, double a, double b, double tol, double roundoff_density, int depth, int max_depth,
                   const PanelEstimate& whole, AdaptiveResult& out)
{
    const double roundoff = roundoff_density * (b - a);
    if (whole.err <= tol || whole.err <= roundoff) {
        out.value += whole.value;
        out.err += whole.err;
        ++out.panels;
        return;
    }
    if (depth >= max_depth) {
        throw convergence_error("adaptive quadrature exceeded max depth " + std::to_string(max_depth) +
                                " on [" + logderiv::detail::num(a) + ", " + logderiv::detail::num(b) + "]");
    }
    const double mid = 0.5 * (a + b);
    const PanelEstimate left = gauss_kronrod_15(f, a, mid);
    const PanelEstimate right = gauss_kronrod_15(f, mid, b);
    adaptive_step(f, a, mid, 0.5 * tol, roundoff_density, depth + 1, max_depth, left, out);
    adaptive_step(f, mid, b, 0.5 * tol, roundoff_density, depth + 1, max_depth, right, out);
}

/// Integrates f over [a, b] to absolute tolerance tol by recursive bisection.
template <class F>
AdaptiveResult integrate_gk(F&& f, double a, double b, double tol, int max_depth = 40)
{
    AdaptiveResult out;
    if (a == b) return out;
    const PanelEstimate whole = gauss_kronrod_15(f, a, b);
    const double density = 50.0 * std::numeric_limits<double>::epsilon() * whole.abs_value / (b - a);
    adaptive_step(f, a, b, tol, density, 0, max_depth, whole, out);
    return out;
}

} // namespace logderiv::detail
