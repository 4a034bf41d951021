#pragma once

#include <stdexcept>
#include <string>

namespace sedsphere {

// Domain violations surface as std::domain_error, out-of-range lookups as
// std::out_of_range and overflow as std::overflow_error. The types below
// cover the cases the standard hierarchy has no name for.

/// A result could not be produced to the requested accuracy (divergent
/// asymptotic regime, quadrature that failed to converge).
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

/// The characteristic polynomial has a double root; the confluent solution
/// is not provided.
class degenerate_root_error : public std::domain_error {
public:
    explicit degenerate_root_error(const std::string& what) : std::domain_error(what) {}
};

/// A solver was asked to do something its configuration does not support.
class configuration_error : public std::invalid_argument {
public:
    explicit configuration_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A conjugate-symmetric complex expression left an imaginary residue far
/// above rounding. Indicates a branch or algebra mistake, never bad input.
class consistency_error : public std::logic_error {
public:
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace sedsphere
