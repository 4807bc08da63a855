#pragma once

#include <stdexcept>
#include <string>

namespace qwire {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Green's function requested at coincident longitudinal positions.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Energy sits on the cut-off of a propagating term (k_n = 0).
class PoleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Energy coincides with a threshold that the exact amplitude cannot be
/// evaluated at; use the threshold-limit operations instead.
class ThresholdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The resonant mode has a node at the impurity (sin(m pi eps) = 0).
class DecoupledModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transverse grid too coarse for the requested number of modes.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sparse linear solve failed (singular system or bad residual).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (bad parameter combination, unreadable file).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qwire
