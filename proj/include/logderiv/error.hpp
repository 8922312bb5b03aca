#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace logderiv {

/// Base of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

/// Argument sits on a pole (Γ or ψ at a nonpositive integer, ...).
class pole_error : public domain_error {
public:
    using domain_error::domain_error;
};

/// An iterative method (series, quadrature, root finder, extrapolation) did not converge.
class convergence_error : public error {
public:
    using error::error;
};

namespace detail {

/// Compact number text for error messages.
inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

} // namespace logderiv
