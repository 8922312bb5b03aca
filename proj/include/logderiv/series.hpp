#pragma once

// Truncated Laurent series and their ln-extended sums Σ_k Q_k(x)·(ln x)^k.
// These are the values the operators in logop and fracdiff act on.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "logderiv/error.hpp"

namespace logderiv {

struct SeriesConfig {
    int trunc_order = 64;       // highest exponent kept
    double eval_guard = 1e-12;  // smallest admissible evaluation point

    void validate() const
    {
        if (trunc_order < 8) throw domain_error("SeriesConfig: trunc_order must be >= 8");
        if (!(eval_guard > 0.0)) throw domain_error("SeriesConfig: eval_guard must be positive");
    }
};

/// Σ_{e = e_min}^{e_max} c_e x^e with integer exponents.
///
/// Always normalized: zero coefficients at either end are stripped, and the
/// zero series is stored with no coefficients and e_min = 0. The truncated
/// flag records that the series stands for a longer (possibly infinite) one.
class LaurentSeries {
public:
    LaurentSeries() = default;

    LaurentSeries(int e_min, std::vector<double> coeffs, bool truncated = false)
        : e_min_(e_min), coeffs_(std::move(coeffs)), truncated_(truncated)
    {
        normalize();
    }

    static LaurentSeries constant(double c) { return LaurentSeries(0, {c}); }
    static LaurentSeries monomial(double c, int n) { return LaurentSeries(n, {c}); }

    int e_min() const { return e_min_; }
    /// Highest stored exponent; 0 for the zero series.
    int e_max() const { return coeffs_.empty() ? 0 : e_min_ + static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool truncated() const { return truncated_; }

    double coeff(int e) const
    {
        if (coeffs_.empty() || e < e_min_ || e > e_max()) return 0.0;
        return coeffs_[static_cast<std::size_t>(e - e_min_)];
    }

    /// Horner on the nonnegative powers, explicit sum over the negative ones.
    double evaluate(double x) const
    {
        if (coeffs_.empty()) return 0.0;
        double value = 0.0;
        const int top = e_max();
        if (top >= 0) {
            const int low = std::max(e_min_, 0);
            for (int e = top; e >= low; --e) value = value * x + coeff(e);
            if (low > 0) value *= std::pow(x, low);
        }
        for (int e = e_min_; e < 0 && e <= top; ++e) value += coeff(e) * std::pow(x, e);
        return value;
    }

    LaurentSeries derivative() const
    {
        if (coeffs_.empty()) return LaurentSeries({}, {}, truncated_);
        std::vector<double> out(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i] * (e_min_ + static_cast<int>(i));
        return LaurentSeries(e_min_ - 1, std::move(out), truncated_);
    }

    /// x^k · this.
    LaurentSeries shifted(int k) const
    {
        if (coeffs_.empty()) return *this;
        return LaurentSeries(e_min_ + k, coeffs_, truncated_);
    }

    /// Drops exponents above order, flagging the result if anything nonzero was cut.
    LaurentSeries truncated_above(int order) const
    {
        if (coeffs_.empty() || e_max() <= order) return *this;
        if (order < e_min_) return LaurentSeries(0, {}, true);
        std::vector<double> kept(coeffs_.begin(), coeffs_.begin() + (order - e_min_ + 1));
        return LaurentSeries(e_min_, std::move(kept), true);
    }

    LaurentSeries with_truncated(bool flag) const
    {
        LaurentSeries out = *this;
        out.truncated_ = flag;
        return out;
    }

    bool operator==(const LaurentSeries&) const = default;

    /// a·f + b·g; a zero weight drops its operand entirely.
    friend LaurentSeries combine(double a, const LaurentSeries& f, double b, const LaurentSeries& g)
    {
        const bool use_f = a != 0.0 && !f.is_zero();
        const bool use_g = b != 0.0 && !g.is_zero();
        const bool flag = (a != 0.0 && f.truncated_) || (b != 0.0 && g.truncated_);
        if (!use_f && !use_g) return LaurentSeries(0, {}, flag);
        const int lo = std::min(use_f ? f.e_min_ : g.e_min_, use_g ? g.e_min_ : f.e_min_);
        const int hi = std::max(use_f ? f.e_max() : g.e_max(), use_g ? g.e_max() : f.e_max());
        std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (int e = lo; e <= hi; ++e) {
            double c = 0.0;
            if (use_f) c += a * f.coeff(e);
            if (use_g) c += b * g.coeff(e);
            out[static_cast<std::size_t>(e - lo)] = c;
        }
        return LaurentSeries(lo, std::move(out), flag);
    }

private:
    void normalize()
    {
        auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
        if (first == coeffs_.end()) {
            coeffs_.clear();
            e_min_ = 0;
            return;
        }
        auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), [](double c) { return c != 0.0; }).base();
        e_min_ += static_cast<int>(first - coeffs_.begin());
        coeffs_ = std::vector<double>(first, last);
    }

    int e_min_ = 0;
    std::vector<double> coeffs_;
    bool truncated_ = false;
};

/// Builds Σ a_n/n! x^n from Taylor coefficients a_0, a_1, ...
inline LaurentSeries from_taylor_coeffs(std::span<const double> a, const SeriesConfig& config = {})
{
    config.validate();
    if (a.size() > static_cast<std::size_t>(config.trunc_order) + 1)
        throw domain_error("from_taylor_coeffs: " + std::to_string(a.size()) + " coefficients exceed trunc_order " +
                           std::to_string(config.trunc_order));
    std::vector<double> c(a.size());
    double inv_factorial = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (n > 0) inv_factorial /= static_cast<double>(n);
        c[n] = a[n] * inv_factorial;
    }
    return LaurentSeries(0, std::move(c));
}

inline constexpr int kMaxLnPower = 2;

/// Σ_{k=0}^{2} Q_k(x)·(ln x)^k.
class LogSeries {
public:
    LogSeries() = default;
    LogSeries(LaurentSeries q0) { parts_[0] = std::move(q0); }  // NOLINT: implicit by intent

    static LogSeries ln_x()
    {
        LogSeries out;
        out.parts_[1] = LaurentSeries::constant(1.0);
        return out;
    }

    const LaurentSeries& part(int k) const
    {
        static const LaurentSeries zero;
        if (k < 0 || k > kMaxLnPower) return zero;
        return parts_[static_cast<std::size_t>(k)];
    }

    LogSeries& set_part(int k, LaurentSeries q)
    {
        if (k < 0 || k > kMaxLnPower) {
            if (q.is_zero()) return *this;
            throw domain_error("LogSeries: ln power " + std::to_string(k) + " exceeds the cap of " +
                               std::to_string(kMaxLnPower));
        }
        parts_[static_cast<std::size_t>(k)] = std::move(q);
        return *this;
    }

    /// Highest k with a nonzero part; 0 when only part 0 (or nothing) is present.
    int ln_degree() const
    {
        for (int k = kMaxLnPower; k > 0; --k)
            if (!parts_[static_cast<std::size_t>(k)].is_zero()) return k;
        return 0;
    }

    bool is_zero() const
    {
        return std::all_of(parts_.begin(), parts_.end(), [](const LaurentSeries& q) { return q.is_zero(); });
    }

    bool truncated() const
    {
        return std::any_of(parts_.begin(), parts_.end(), [](const LaurentSeries& q) { return q.truncated(); });
    }

    bool operator==(const LogSeries&) const = default;

private:
    std::array<LaurentSeries, kMaxLnPower + 1> parts_{};
};

inline LogSeries linear_combine(double alpha, const LogSeries& f, double beta, const LogSeries& g)
{
    LogSeries out;
    for (int k = 0; k <= kMaxLnPower; ++k) out.set_part(k, combine(alpha, f.part(k), beta, g.part(k)));
    return out;
}

/// ln(x)·f.
inline LogSeries mul_ln(const LogSeries& f)
{
    if (!f.part(kMaxLnPower).is_zero())
        throw domain_error("mul_ln: result would carry (ln x)^" + std::to_string(kMaxLnPower + 1));
    LogSeries out;
    for (int k = kMaxLnPower; k >= 1; --k) out.set_part(k, f.part(k - 1));
    return out;
}

/// d/dx [Q_k (ln x)^k] = Q_k' (ln x)^k + k (Q_k / x) (ln x)^(k-1)
inline LogSeries differentiate(const LogSeries& f)
{
    LogSeries out;
    for (int k = 0; k <= kMaxLnPower; ++k) {
        LaurentSeries q = f.part(k).derivative();
        if (k < kMaxLnPower) q = combine(1.0, q, static_cast<double>(k + 1), f.part(k + 1).shifted(-1));
        out.set_part(k, std::move(q));
    }
    return out;
}

inline double evaluate(const LogSeries& f, double x, const SeriesConfig& config = {})
{
    if (!(x >= config.eval_guard) || !std::isfinite(x))
        throw domain_error("evaluate: x = " + logderiv::detail::num(x) + " is below the evaluation guard");
    const double lnx = std::log(x);
    double value = 0.0;
    double ln_power = 1.0;
    for (int k = 0; k <= kMaxLnPower; ++k) {
        value += f.part(k).evaluate(x) * ln_power;
        ln_power *= lnx;
    }
    return value;
}

/// Human-readable form, terms ordered by ln power then exponent,
/// e.g. "-0.5772156649 - 1*ln(x)".
inline std::string render(const LogSeries& f)
{
    std::string out;
    for (int k = 0; k <= kMaxLnPower; ++k) {
        const LaurentSeries& q = f.part(k);
        for (int e = q.e_min(); !q.is_zero() && e <= q.e_max(); ++e) {
            const double c = q.coeff(e);
            if (c == 0.0) continue;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.10g", std::abs(c));
            if (out.empty()) out += c < 0 ? "-" : "";
            else out += c < 0 ? " - " : " + ";
            out += buf;
            if (e == 1) out += "*x";
            else if (e != 0) out += "*x^" + std::to_string(e);
            if (k == 1) out += "*ln(x)";
            else if (k > 1) out += "*ln(x)^" + std::to_string(k);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace logderiv
