#pragma once

#include <stdexcept>
#include <string>

namespace fadecv {

/// Scalar argument outside its allowed range (mu < 1, eta outside [0,1], ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Covariance matrix violating symmetry, positivity or the uncertainty bound.
struct invalid_state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Eavesdropper covariance matrix that fails the physicality test.
struct attack_rejected_error : invalid_state_error {
    using invalid_state_error::invalid_state_error;
};

/// Homodyne conditioning on a quadrature with (numerically) zero variance.
struct degenerate_measurement_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix/mode dimensions that do not match.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace fadecv
