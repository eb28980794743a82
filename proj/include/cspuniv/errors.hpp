#pragma once

#include <stdexcept>
#include <string>

namespace cspuniv {

// Bad arguments: unknown ids, arity mismatches, malformed algorithm strings.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Schema violations while loading JSON; the message starts with the JSON path.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured search or enumeration cap was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computed object failed its own post-condition check.
struct PropertyViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cspuniv
