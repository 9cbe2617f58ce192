#pragma once

#include <stdexcept>
#include <string>

namespace hpng {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct StructuralError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ConflictError : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };
struct RunawayError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };

// Node budget of the tree builder exhausted.
struct ResourceError : Error { using Error::Error; };

// Malformed model document. `where` is a JSON pointer or "line:col".
struct ParseError : Error {
    ParseError(const std::string& where, const std::string& what)
        : Error(where + ": " + what), location(where) {}
    std::string location;
};

}  // namespace hpng
