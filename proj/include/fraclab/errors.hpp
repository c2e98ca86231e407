#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but makes the requested quantity meaningless
/// (zero denominators, non-positive values in a log fit, ...).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation point coincides with a kernel singularity.
class SingularInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN/Inf in an iterate, failed factorization.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fraclab
