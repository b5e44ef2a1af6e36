// common.hpp — shared constants, complex alias, and error types for the
// giant-atom waveguide toolkit. All frequencies and rates are kept as the
// dimensionless products omega0*tau0 and Gamma*tau0 (radian units); time is
// measured in units of the inter-point delay tau0 throughout.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gaw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx iu{0.0, 1.0}; // imaginary unit

inline constexpr const char* version = "0.1.0";

// ------------------------- error types -------------------------
// Thin wrappers so callers (and the CLI exit-code mapping) can tell a bad
// configuration from a numerical failure.

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dde
struct step_too_coarse : config_error {
    using config_error::config_error;
};
struct horizon_negative : config_error {
    using config_error::config_error;
};

// spectral
struct cotangent_pole : config_error {
    using config_error::config_error;
};
struct infeasible : config_error {
    using config_error::config_error;
};

// analytic
struct condition_not_met : config_error {
    using config_error::config_error;
};
struct wrong_case : config_error {
    using config_error::config_error;
};

// field
struct history_too_short : config_error {
    using config_error::config_error;
};

// io
struct config_parse_error : config_error {
    using config_error::config_error;
};

} // namespace gaw
