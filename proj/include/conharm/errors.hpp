#pragma once

#include <stdexcept>
#include <string>

namespace conharm {

// Argument outside the supported domain (negative radius, r > r_max, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inconsistent or incomplete configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data that fails a structural check (non-monotone table, nonzero mean, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The requested operation is not available for this object.
class CapabilityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Quadrature or ODE integration did not converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace conharm
