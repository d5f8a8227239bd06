#pragma once

#include <stdexcept>
#include <string>

namespace homoperc {

// Coset enumeration ran out of its table budget before closing.
struct CapacityExceeded : std::runtime_error {
    explicit CapacityExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A finite quotient was produced but is unusable as a surface graph
// (multi-edges, too few faces, collapsed cells).
struct DegenerateQuotient : std::runtime_error {
    explicit DegenerateQuotient(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or stream.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Inconsistent arguments to a numerical routine.
struct InvalidArgument : std::invalid_argument {
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A fit could not be carried out (singular system, too few points).
struct FitFailure : std::runtime_error {
    explicit FitFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace homoperc
