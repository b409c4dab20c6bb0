#pragma once

#include <stdexcept>
#include <string>

namespace htpq {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed textual input (polynomials, descriptors, rationals, records).
struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

/// Precondition violation on a mathematical operation (zero polynomial,
/// non-prime argument, variable clash, ...).
struct domain_error : error {
    explicit domain_error(const std::string& what) : error(what) {}
};

/// A configured resource budget was exceeded.  Never silently converted
/// into a mathematical claim such as "exhausted".
struct resource_limit_error : error {
    explicit resource_limit_error(const std::string& what) : error(what) {}
};

/// Trial-division factorization hit its bound before finishing.
struct factor_bound_error : resource_limit_error {
    explicit factor_bound_error(const std::string& what)
        : resource_limit_error(what) {}
};

}  // namespace htpq
