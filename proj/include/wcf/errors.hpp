#pragma once

#include <stdexcept>
#include <string>

namespace wcf {

// Bad caller input: ordering, degree, malformed lists. The CLI maps it to exit 64.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A geometric precondition failed (null normal, point in the null cone, ...).
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A construction step violated its schedule assertions.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wcf
