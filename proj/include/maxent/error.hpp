#pragma once

#include <stdexcept>
#include <string>

namespace maxent {

// Raised for problems with the caller's input: malformed files, infeasible
// constraints, inconsistent options. The CLI maps it to exit code 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace maxent
